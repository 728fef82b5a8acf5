"""
Two-step nilpotent groups attached to an ingredient list.

G = T x N with (t, zeta)(t', zeta') = (t + t' - c(zeta, zeta')/2, zeta + zeta'),
its closed subgroup H of periods, and the discrete group Gamma of pairs
(B, beta) with B in (T_f)_Z and beta in P that acts on t_f x N x Delta.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from coisotropic.errors import FrameMismatch, ShapeMismatch
from coisotropic.exact_linalg import (
    IntVector,
    QMatrix,
    Vector,
    add,
    is_integral,
    scale,
    to_int_vector,
    unit_vector,
    vec,
)
from coisotropic.holonomy import HolonomyMap, tau_of
from coisotropic.ingredients import IngredientList
from coisotropic.torus import Subtorus, TorusElement, complement_matrix, lift, split_element

logger = logging.getLogger(__name__)


# --- G = T x N ---


@dataclass(frozen=True)
class GElement:
    context: IngredientList
    t: TorusElement
    zeta: Vector

    def __post_init__(self) -> None:
        object.__setattr__(self, "zeta", vec(self.zeta))
        if len(self.zeta) != self.context.d_n or self.t.dim != self.context.d:
            raise ShapeMismatch("group element does not match the ingredient frame")


def _same_frame(a: IngredientList, b: IngredientList) -> None:
    if a is not b and a.structure_key() != b.structure_key():
        raise FrameMismatch("elements belong to different ingredient frames")


def _c_ambient(lst: IngredientList, z1: Sequence[object], z2: Sequence[object]) -> Vector:
    return lst.frame.from_l(lst.c_n(z1, z2))


def g_identity(lst: IngredientList) -> GElement:
    return GElement(lst, TorusElement.identity(lst.d), (Fraction(0),) * lst.d_n)


def g_multiply(a: GElement, b: GElement) -> GElement:
    _same_frame(a.context, b.context)
    half_c = TorusElement.exp(scale(Fraction(-1, 2), _c_ambient(a.context, a.zeta, b.zeta)))
    return GElement(a.context, a.t + b.t + half_c, add(a.zeta, b.zeta))


def g_inverse(a: GElement) -> GElement:
    return GElement(a.context, -a.t, tuple(-z for z in a.zeta))


def g_exp(lst: IngredientList, x: Sequence[object], zeta: Sequence[object]) -> GElement:
    """Exponential of (X, zeta) in the Lie algebra t x N."""
    return GElement(lst, TorusElement.exp(x), zeta)


def g_bracket(
    lst: IngredientList, x1: tuple[Sequence[object], Sequence[object]], x2: tuple[Sequence[object], Sequence[object]]
) -> tuple[Vector, Vector]:
    """[(X, zeta), (X', zeta')] = (-c(zeta, zeta'), 0)."""
    _, z1 = x1
    _, z2 = x2
    return scale(-1, _c_ambient(lst, z1, z2)), (Fraction(0),) * lst.d_n


def h_contains(g: GElement, tau: HolonomyMap) -> bool:
    """Whether g lies in H = {(t, zeta) : zeta in P, t * tau_zeta in T_h}."""
    _same_frame(g.context, tau.context)
    zeta_p = g.context.n_to_p(g.zeta)
    if not is_integral(zeta_p):
        return False
    return g.context.t_h.contains_element(g.t + tau_of(tau, to_int_vector(zeta_p)))


def h_generators(tau: HolonomyMap) -> tuple[GElement, ...]:
    """The elements (tau_l^{-1}, eps^l) of H lying over the P-basis."""
    lst = tau.context
    return tuple(GElement(lst, -tau.values[i], lst.p_to_n(unit_vector(lst.d_n, i))) for i in range(lst.d_n))


# --- Gamma ---


@dataclass(frozen=True)
class GammaContext:
    """An ingredient list together with a complement T_f of T_h."""

    ingredients: IngredientList
    t_f: Subtorus

    def __post_init__(self) -> None:
        complement_matrix(self.ingredients.t_h, self.t_f)

    @classmethod
    def default(cls, lst: IngredientList) -> "GammaContext":
        return cls(lst, lst.default_complement())

    @property
    def d_f(self) -> int:
        return self.t_f.dim

    @cached_property
    def split_inverse(self) -> QMatrix:
        return complement_matrix(self.ingredients.t_h, self.t_f).inverse()

    def h_coords(self, x: Sequence[object]) -> Vector:
        return self.split_inverse.apply(vec(x))[: self.ingredients.dim_h]

    def f_coords(self, x: Sequence[object]) -> Vector:
        return self.split_inverse.apply(vec(x))[self.ingredients.dim_h :]

    def c_f(self, beta: Sequence[object], beta2: Sequence[object]) -> Vector:
        lst = self.ingredients
        return self.f_coords(lst.frame.from_l(lst.c_p(beta, beta2)))

    def c_h(self, beta: Sequence[object], beta2: Sequence[object]) -> Vector:
        lst = self.ingredients
        return self.h_coords(lst.frame.from_l(lst.c_p(beta, beta2)))

    def b_f(self, beta: Sequence[object], beta2: Sequence[object]) -> Vector:
        lst = self.ingredients
        return self.f_coords(lst.frame.from_l(lst.b_p(beta, beta2)))

    @cached_property
    def lifts_f(self) -> tuple[Vector, ...]:
        """T_f-coordinates of the canonical lifts X^l of tau_l."""
        return tuple(self.f_coords(lift(t)) for t in self.ingredients.tau_values)

    @cached_property
    def l_directions_f(self) -> tuple[Vector, ...]:
        """
        Basis of l intersect t_f dual to the N-basis, in T_f-coordinates.

        The t_f-component of W_j differs from W_j by an element of t_h, so it
        lies in l and has the same class in l/t_h.
        """
        return tuple(self.f_coords(w) for w in self.ingredients.frame.w_basis)

    def c_h_n(self, z1: Sequence[object], z2: Sequence[object]) -> Vector:
        """c_h for arguments in N-coordinates."""
        lst = self.ingredients
        return self.h_coords(lst.frame.from_l(lst.c_n(z1, z2)))


@dataclass(frozen=True)
class GammaElement:
    context: GammaContext
    B: IntVector
    beta: IntVector

    def __post_init__(self) -> None:
        object.__setattr__(self, "B", tuple(int(x) for x in self.B))
        object.__setattr__(self, "beta", tuple(int(x) for x in self.beta))
        if len(self.B) != self.context.d_f or len(self.beta) != self.context.ingredients.d_n:
            raise ShapeMismatch("Gamma element does not match its context")


def _same_context(a: GammaContext, b: GammaContext) -> None:
    if a is not b and a != b:
        raise FrameMismatch("Gamma elements belong to different contexts")


def gamma_identity(ctx: GammaContext) -> GammaElement:
    return GammaElement(ctx, (0,) * ctx.d_f, (0,) * ctx.ingredients.d_n)


def gamma_multiply(a: GammaElement, b: GammaElement) -> GammaElement:
    """(B', beta')(B, beta) = (B + B' - b_f(beta, beta'), beta + beta') with a = (B', beta')."""
    _same_context(a.context, b.context)
    correction = a.context.b_f(b.beta, a.beta)
    B = tuple(x + y - z for x, y, z in zip(b.B, a.B, correction))
    return GammaElement(a.context, to_int_vector(B), tuple(x + y for x, y in zip(a.beta, b.beta)))


def gamma_inverse(a: GammaElement) -> GammaElement:
    correction = a.context.b_f(a.beta, a.beta)
    return GammaElement(
        a.context, to_int_vector(-x - y for x, y in zip(a.B, correction)), tuple(-x for x in a.beta)
    )


def gamma_commutator(a: GammaElement, b: GammaElement) -> GammaElement:
    """b^-1 a^-1 b a, which equals (c_f(beta_b, beta_a), 0)."""
    return gamma_multiply(gamma_multiply(gamma_inverse(b), gamma_inverse(a)), gamma_multiply(b, a))


def gamma_conjugate(a: GammaElement, b: GammaElement) -> GammaElement:
    """a^-1 b a."""
    return gamma_multiply(gamma_multiply(gamma_inverse(a), b), a)


@dataclass(frozen=True)
class GammaPoint:
    """A point (Z, zeta, mu) of t_f x N x Delta."""

    Z: Vector
    zeta: Vector
    mu: Vector = ()


@dataclass(frozen=True)
class GammaAction:
    point: GammaPoint
    hamiltonian_factor: TorusElement


def gamma_act(g: GammaElement, point: GammaPoint) -> GammaAction:
    """
    Action of g = (B, beta) on (Z, zeta, mu):

        Z'    = Z + B - beta_l X^l_f + b_f(beta, beta)/2 + c_f(beta, zeta)/2
        zeta' = zeta + beta

    The Delzant factor is moved by exp(c_h(beta, zeta)/2) (tau_{-beta})_h,
    which is returned rather than applied.
    """
    ctx = g.context
    lst = ctx.ingredients
    z, zeta = vec(point.Z), vec(point.zeta)
    if len(z) != ctx.d_f or len(zeta) != lst.d_n:
        raise ShapeMismatch("point does not match the Gamma context")
    zeta_p = lst.n_to_p(zeta)
    shift = [Fraction(x) for x in g.B]
    for b, x in zip(g.beta, ctx.lifts_f):
        shift = [s - b * xi for s, xi in zip(shift, x)]
    shift = add(shift, scale(Fraction(1, 2), ctx.b_f(g.beta, g.beta)))
    shift = add(shift, scale(Fraction(1, 2), ctx.c_f(g.beta, zeta_p)))
    new_point = GammaPoint(add(z, shift), add(zeta, lst.p_to_n(g.beta)), vec(point.mu))

    tau = HolonomyMap.of(lst)
    tau_h, _ = split_element(tau_of(tau, tuple(-b for b in g.beta)), lst.t_h, ctx.t_f)
    c_h = ctx.c_h(g.beta, zeta_p)
    half = [Fraction(0)] * lst.d
    for coeff, y in zip(c_h, lst.t_h.basis):
        half = [h + coeff * yk / 2 for h, yk in zip(half, y)]
    return GammaAction(new_point, TorusElement(tuple(half)) + tau_h)


def psi_shift(ctx: GammaContext, point: GammaPoint) -> GammaPoint:
    """
    Z -> Z + w with w in l intersect t_f given by zeta'(w) = mu(c_h(zeta', zeta))/2;
    this turns the form on the universal cover into a product form.
    """
    lst = ctx.ingredients
    mu = vec(point.mu)
    if len(mu) != lst.dim_h:
        raise ShapeMismatch(f"mu must have {lst.dim_h} coordinates")
    zeta = vec(point.zeta)
    if len(zeta) != lst.d_n:
        raise ShapeMismatch(f"zeta must have {lst.d_n} coordinates")
    w = [Fraction(0)] * ctx.d_f
    for j, direction in enumerate(ctx.l_directions_f):
        c_h = ctx.c_h_n(unit_vector(lst.d_n, j), zeta)
        coeff = sum((m * c for m, c in zip(mu, c_h)), Fraction(0)) / 2
        w = [a + coeff * b for a, b in zip(w, direction)]
    return GammaPoint(add(point.Z, w), zeta, mu)

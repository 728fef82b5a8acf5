"""
Holonomy maps P -> T that are homomorphisms up to the cocycle c, the
subspace A = c(., N) + Sym|_P of Hom(P, t), and the moduli dimension.

A holonomy map is stored by its values on the P-basis; the value at any
other period is obtained by the expansion

    tau_zeta = exp(sum_{l<m} zeta_l zeta_m c^{lm} / 2) * prod tau_l^{zeta_l}

unless an explicit override was recorded for that period.
"""

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import TYPE_CHECKING

from coisotropic.config import load_settings
from coisotropic.errors import Condition5aViolated, FrameMismatch, ShapeMismatch
from coisotropic.exact_linalg import (
    IntegerLattice,
    IntVector,
    QMatrix,
    QSubspace,
    Vector,
    is_integral,
    member_subspace_plus_lattice,
    vec,
)
from coisotropic.torus import TorusElement

if TYPE_CHECKING:
    from coisotropic.ingredients import IngredientList

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HolonomyMap:
    context: "IngredientList"
    values: tuple[TorusElement, ...]
    overrides: tuple[tuple[IntVector, TorusElement], ...] = ()

    @classmethod
    def of(cls, lst: "IngredientList") -> "HolonomyMap":
        return cls(lst, lst.tau_values)

    def with_override(self, zeta: Sequence[int], value: TorusElement) -> "HolonomyMap":
        """Record an explicit holonomy for a composite period."""
        zeta = tuple(int(z) for z in zeta)
        kept = tuple((z, v) for z, v in self.overrides if z != zeta)
        return HolonomyMap(self.context, self.values, (*kept, (zeta, value)))


def tau_of(tau: HolonomyMap, zeta: Sequence[int]) -> TorusElement:
    zeta = tuple(int(z) for z in zeta)
    if len(zeta) != tau.context.d_n:
        raise ShapeMismatch(f"period with {len(zeta)} P-coordinates, expected {tau.context.d_n}")
    for z, value in tau.overrides:
        if z == zeta:
            return value
    return tau.context.expand_holonomy(tau.values, zeta)


def _words(n: int, length: int) -> Iterator[IntVector]:
    for zeta in product(range(-length, length + 1), repeat=n):
        if sum(abs(z) for z in zeta) <= length:
            yield zeta


def find_hom_c_violation(tau: HolonomyMap, word_length: int | None = None) -> tuple[IntVector, IntVector] | None:
    """
    First pair (zeta, zeta') of short words where
    tau_zeta' * tau_zeta != tau_{zeta+zeta'} * exp(c(zeta', zeta)/2).
    """
    lst = tau.context
    length = word_length or load_settings().holonomy_word_length
    words = list(_words(lst.d_n, length))
    cache: dict[IntVector, TorusElement] = {}

    def value(z: IntVector) -> TorusElement:
        if z not in cache:
            cache[z] = tau_of(tau, z)
        return cache[z]

    for z1 in words:
        for z2 in words:
            lhs = value(z2) + value(z1)
            total = tuple(a + b for a, b in zip(z1, z2))
            correction = TorusElement.exp([x / 2 for x in lst.frame.from_l(lst.c_p(z2, z1))])
            if lhs != value(total) + correction:
                logger.debug("Holonomy relation fails for %s, %s", z1, z2)
                return z1, z2
    return None


def verify_hom_c(tau: HolonomyMap) -> bool:
    return find_hom_c_violation(tau) is None


def _require_integral(lst: "IngredientList") -> None:
    for i in range(lst.d_n):
        for j in range(i + 1, lst.d_n):
            if not is_integral(lst.c_ambient(i, j)):
                raise Condition5aViolated(f"c(eps^{i + 1}, eps^{j + 1}) is not in the integral lattice")


def make_hom_c(lst: "IngredientList", free_choices: Sequence[TorusElement]) -> HolonomyMap:
    """The holonomy map with prescribed values on the P-basis."""
    _require_integral(lst)
    if len(free_choices) != lst.d_n:
        raise ShapeMismatch(f"{len(free_choices)} values for {lst.d_n} P-generators")
    return HolonomyMap(lst, tuple(free_choices))


def twist(tau: HolonomyMap, h: Sequence[TorusElement]) -> HolonomyMap:
    """Action of the homomorphism P -> T with basis values ``h``."""
    if len(h) != len(tau.values):
        raise ShapeMismatch("twist needs one torus element per P-generator")
    values = tuple(a + b for a, b in zip(tau.values, h))
    overrides = []
    for zeta, v in tau.overrides:
        shift = TorusElement.identity(tau.context.d)
        for z, t in zip(zeta, h):
            shift = shift + t.scale(z)
        overrides.append((zeta, v + shift))
    return HolonomyMap(tau.context, values, tuple(overrides))


def twist_by_a(tau: HolonomyMap, alpha: Sequence[object]) -> HolonomyMap:
    """Twist by exp(alpha) for alpha in Hom(P, t), stacked per P-generator."""
    d = tau.context.d
    alpha = vec(alpha)
    if len(alpha) != d * len(tau.values):
        raise ShapeMismatch("alpha must have d coordinates per P-generator")
    return twist(tau, [TorusElement.exp(alpha[i * d : (i + 1) * d]) for i in range(len(tau.values))])


# --- The subspace A ---


@dataclass(frozen=True)
class SpaceA:
    generators: tuple[Vector, ...]
    subspace: QSubspace

    @property
    def dim(self) -> int:
        return self.subspace.dim


@lru_cache(maxsize=128)
def space_a_basis(lst: "IngredientList") -> SpaceA:
    """
    Generators of A inside Hom(P, t) = t^{d_N}, each stacked as
    (h(eps^1), ..., h(eps^{d_N})).
    """
    n, d, dim_h, dim_l = lst.d_n, lst.d, lst.dim_h, lst.dim_l
    generators: list[Vector] = []
    for m in range(n):
        generators.append(tuple(x for i in range(n) for x in lst.c_ambient(i, m)))
    frame = lst.frame
    for a in range(dim_l):
        for b in range(a, dim_l):
            stacked: list[Fraction] = []
            for p in lst.p_basis:
                xi = (Fraction(0),) * dim_h + tuple(Fraction(x) for x in p)
                image = [Fraction(0)] * dim_l
                image[a] += xi[b]
                if a != b:
                    image[b] += xi[a]
                stacked.extend(frame.from_l(image))
            generators.append(tuple(stacked))
    return SpaceA(tuple(generators), QSubspace.span(generators, n * d))


def equivalent(tau1: HolonomyMap, tau2: HolonomyMap) -> bool:
    """Whether tau2 = tau1 * exp(alpha) with alpha in A."""
    if tau1.context.structure_key() != tau2.context.structure_key():
        raise FrameMismatch("holonomy maps belong to different ingredient frames")
    a = space_a_basis(tau1.context)
    diff = tuple(x for t1, t2 in zip(tau1.values, tau2.values) for x in (t2 - t1).coords)
    return member_subspace_plus_lattice(diff, a.subspace, IntegerLattice.full(len(diff)))


# --- Moduli dimension ---


@dataclass(frozen=True)
class DimModuli:
    direct: int
    formula_crosscheck: int | None
    stated_formula: int
    corrected_formula: int
    ker_c: int
    ker_c_f: int
    c_annihilator: int


def _rank(rows: list[Vector], cols: int) -> int:
    return QMatrix.from_rows(rows, cols).rank() if rows and cols else 0


def kernel_dims(lst: "IngredientList") -> tuple[int, int, int]:
    """(dim ker c, dim ker c_f, dim c0) for the default complement."""
    n, dim_h, dim_l = lst.d_n, lst.dim_h, lst.dim_l
    c_rows = [tuple(lst.c_l(i, m)[k] for i in range(n)) for m in range(n) for k in range(dim_l)]
    cf_rows = [tuple(lst.c_l(i, m)[k] for i in range(n)) for m in range(n) for k in range(dim_h, dim_l)]
    ann_rows = [lst.c_l(i, j)[dim_h:] for i in range(n) for j in range(i + 1, n)]
    return n - _rank(c_rows, n), n - _rank(cf_rows, n), n - _rank(ann_rows, n)


def dim_moduli(lst: "IngredientList") -> DimModuli:
    n, d = lst.d_n, lst.d
    if n == 0:
        return DimModuli(0, 0 if lst.dim_h == 0 else None, 0, 0, 0, 0, 0)
    direct = n * d - space_a_basis(lst).dim
    ker_c, ker_cf, c0 = kernel_dims(lst)
    stated = n * (d - n) + n * (n - 3) // 2 + ker_cf - ker_c + c0
    corrected = stated - n * lst.dim_h
    crosscheck = stated if lst.dim_h == 0 else None
    if lst.dim_h == 0 and stated != direct:
        logger.error("Moduli dimension formula gives %d but direct computation gives %d", stated, direct)
    if lst.dim_h > 0 and stated != direct:
        logger.warning(
            "Moduli dimension: direct value %d differs from the closed formula %d (with Hamiltonian correction: %d)",
            direct, stated, corrected,
        )
    return DimModuli(direct, crosscheck, stated, corrected, ker_c, ker_cf, c0)

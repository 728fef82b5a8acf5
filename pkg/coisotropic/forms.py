"""
Exact evaluation of the model symplectic forms.

The Delzant factor M_h never appears as a manifold: wherever the form needs
it, the caller supplies the pairings through a ``DelzantOracle`` together
with the momentum value mu(x) in Delta.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from coisotropic.errors import NotContained, OracleMissing, ShapeMismatch, SingularChart, SplittingAbsent
from coisotropic.exact_linalg import (
    IntegerLattice,
    IntVector,
    QMatrix,
    Vector,
    dot,
    integral_basis,
    kernel_q,
    scale,
    to_int_vector,
    unit_vector,
    vec,
)
from coisotropic.ingredients import Frame, IngredientList, build_frame
from coisotropic.nilgroup import GammaContext
from coisotropic.torus import Subtorus, complement_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Tangent:
    """Tangent vector (delta t, delta zeta) of T x N; zeta in N-coordinates."""

    dt: Vector
    dzeta: Vector

    def __post_init__(self) -> None:
        object.__setattr__(self, "dt", vec(self.dt))
        object.__setattr__(self, "dzeta", vec(self.dzeta))


@dataclass(frozen=True)
class DelzantOracle:
    """
    Pairings of the Delzant form at a point x for two tangent vectors
    dx, d'x: sigma_h(dx, (Y_j)_M) and sigma_h(d'x, (Y_j)_M) for each basis
    vector Y_j of the Hamiltonian lattice, and sigma_h(dx, d'x).
    """

    pair_dx: Vector
    pair_d2x: Vector
    sigma_dx_d2x: Fraction = Fraction(0)

    def swapped(self) -> "DelzantOracle":
        return DelzantOracle(self.pair_d2x, self.pair_dx, -Fraction(self.sigma_dx_d2x))


def _check_tangent(lst: IngredientList, v: Tangent) -> None:
    if len(v.dt) != lst.d or len(v.dzeta) != lst.d_n:
        raise ShapeMismatch("tangent vector does not match the ingredient frame")


def omega_eval(
    lst: IngredientList,
    zeta: Sequence[object],
    da: Tangent,
    d2a: Tangent,
    mu: Sequence[object] = (),
    oracle: DelzantOracle | None = None,
) -> Fraction:
    """
    Pull-back of the symplectic form at a point (t, zeta) of T x N x M_h:

        sigma_t(dt, d't) + dzeta(X'_l) - d'zeta(X_l) - mu(c_h(dzeta, d'zeta))
          + sigma_h(dx, X'_h M) - sigma_h(d'x, X_h M) + sigma_h(dx, d'x)

    with X = dt + c(dzeta, zeta)/2. The value does not depend on t.
    """
    _check_tangent(lst, da)
    _check_tangent(lst, d2a)
    zeta = vec(zeta)
    mu = vec(mu)
    if lst.dim_h and oracle is None:
        raise OracleMissing("a Delzant oracle is required when the Hamiltonian torus is nontrivial")
    if len(mu) != lst.dim_h:
        raise ShapeMismatch(f"mu must have {lst.dim_h} coordinates")
    frame = lst.frame
    x1 = tuple(a + b / 2 for a, b in zip(da.dt, frame.from_l(lst.c_n(da.dzeta, zeta))))
    x2 = tuple(a + b / 2 for a, b in zip(d2a.dt, frame.from_l(lst.c_n(d2a.dzeta, zeta))))
    value = lst.sigma_t.bilinear(da.dt, d2a.dt)
    value += lst.pairing(da.dzeta, x2) - lst.pairing(d2a.dzeta, x1)
    value -= dot(mu, lst.c_n(da.dzeta, d2a.dzeta)[: lst.dim_h])
    if oracle is not None and lst.dim_h:
        value += dot(frame.h_part(x2), oracle.pair_dx) - dot(frame.h_part(x1), oracle.pair_d2x)
        value += Fraction(oracle.sigma_dx_d2x)
    return value


# --- Local model near an orbit with stabilizer ---


@dataclass(frozen=True)
class StabilizerChart:
    """
    Local chart around an orbit whose stabilizer has Lie algebra h, spanned
    by the integer vectors ``x_basis``. The remaining directions of l are
    the vectors U of the frame; (l/h)* is written dual to U.
    """

    sigma_t: QMatrix
    x_basis: tuple[IntVector, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "x_basis", tuple(to_int_vector(vec(x)) for x in self.x_basis))
        d = self.sigma_t.rows
        lattice = IntegerLattice.span(self.x_basis, d)
        if lattice.rank != len(self.x_basis):
            raise SingularChart("stabilizer vectors are linearly dependent")
        if not lattice.is_saturated():
            raise SingularChart("stabilizer vectors do not span a saturated lattice")
        coords = [lattice.coordinates(x) for x in self.x_basis]
        if abs(QMatrix.from_columns(coords, lattice.rank).det()) != 1:
            raise SingularChart("stabilizer vectors are not a basis of their lattice")

    @cached_property
    def frame(self) -> Frame:
        try:
            return build_frame(self.sigma_t, IntegerLattice.span(self.x_basis, self.sigma_t.rows))
        except NotContained as exc:
            raise SingularChart(str(exc)) from None

    @property
    def m(self) -> int:
        return len(self.x_basis)

    @cached_property
    def _x_change(self) -> QMatrix:
        # Y-coordinates -> X-coordinates
        g = QMatrix.from_columns([self.frame.h_part(x) for x in self.x_basis], self.m)
        return g.inverse()

    def x_coords(self, y: Sequence[object]) -> Vector:
        return self._x_change.apply(self.frame.h_part(y))

    def u_coords(self, y: Sequence[object]) -> Vector:
        return self.frame.w_part(y)

    @cached_property
    def lattice_basis(self) -> tuple[Vector, ...]:
        """Canonical basis of the integer points of l on which forms are evaluated."""
        return tuple(vec(b) for b in integral_basis(kernel_q(self.sigma_t)).basis)


@dataclass(frozen=True)
class LocalTangent:
    dX: Vector
    dlam: Vector
    drho: Vector
    dtheta: Vector


def local_form_eval(chart: StabilizerChart, v1: LocalTangent, v2: LocalTangent) -> Fraction:
    """
    sigma_t(X, X') + dlam(X'_l) - d'lam(X_l) + sum_j (drho_j d'theta_j - d'rho_j dtheta_j)

    with the 2 pi of the polar coordinates on C^m absorbed into rho.
    """
    for v in (v1, v2):
        if len(v.drho) != chart.m or len(v.dtheta) != chart.m or len(v.dlam) != chart.frame.d_n:
            raise ShapeMismatch("local tangent vector does not match the chart")
    value = chart.sigma_t.bilinear(v1.dX, v2.dX)
    value += dot(v1.dlam, chart.u_coords(v2.dX)) - dot(v2.dlam, chart.u_coords(v1.dX))
    value += dot(v1.drho, v2.dtheta) - dot(v2.drho, v1.dtheta)
    return value


def a_iso_apply(chart: StabilizerChart, dlam: Sequence[object], drho: Sequence[object], y: Sequence[object]) -> Fraction:
    """A(dlam, drho)(Y) = dlam(Y mod h) + sum_j drho_j * (X_j-coordinate of Y)."""
    return dot(vec(dlam), chart.u_coords(y)) + dot(vec(drho), chart.x_coords(y))


def a_iso(chart: StabilizerChart, dlam: Sequence[object], drho: Sequence[object]) -> Vector:
    """The form A(dlam, drho) on l, given by its values on ``chart.lattice_basis``."""
    return tuple(a_iso_apply(chart, dlam, drho, b) for b in chart.lattice_basis)


def a_iso_inverse(chart: StabilizerChart, xi: Sequence[object]) -> tuple[Vector, Vector]:
    xi = vec(xi)
    rows = [chart.x_coords(b) + chart.u_coords(b) for b in chart.lattice_basis]
    if len(xi) != len(rows):
        raise ShapeMismatch(f"form must have {len(rows)} values")
    if not rows:
        return (), ()
    solution = QMatrix.from_rows(rows, len(rows)).inverse().apply(xi)
    return solution[chart.m :], solution[: chart.m]


# --- Constant forms on t_f x N ---


def _complement_or_default(lst: IngredientList, t_f: Subtorus | None) -> Subtorus:
    t_f = t_f or lst.default_complement()
    complement_matrix(lst.t_h, t_f)
    return t_f


def nu_matrix(lst: IngredientList, t_f: Subtorus | None = None) -> QMatrix:
    """
    Matrix of sigma((dZ, dzeta), (d'Z, d'zeta)) = sigma_t(dZ, d'Z) + dzeta(d'Z_l) - d'zeta(dZ_l)
    on the basis (Z_1, ..., Z_{d_f}, e_1, ..., e_{d_N}).
    """
    t_f = _complement_or_default(lst, t_f)
    zero_z = (Fraction(0),) * lst.d
    zero_n = (Fraction(0),) * lst.d_n
    basis = [(vec(z), zero_n) for z in t_f.basis]
    basis += [(zero_z, tuple(Fraction(1 if k == j else 0) for k in range(lst.d_n))) for j in range(lst.d_n)]

    def pairing(u: tuple[Vector, Vector], v: tuple[Vector, Vector]) -> Fraction:
        return lst.sigma_t.bilinear(u[0], v[0]) + lst.pairing(u[1], v[0]) - lst.pairing(v[1], u[0])

    size = len(basis)
    return QMatrix.from_rows([[pairing(u, v) for v in basis] for u in basis], size)


def nu_nondegenerate(lst: IngredientList, t_f: Subtorus | None = None) -> bool:
    return nu_matrix(lst, t_f).det() != 0


def sigma_f_eval(lst: IngredientList, t_f: Subtorus, zeta: Sequence[object], v1: Tangent, v2: Tangent) -> Fraction:
    """
    The form on M_f = T_f x N when c takes values in t_f:

        sigma_t(dt, d't) + dzeta(X'_l) - d'zeta(X_l),  X = dt + c(dzeta, zeta)/2
    """
    ctx = GammaContext(lst, t_f)
    for i in range(lst.d_n):
        for j in range(i + 1, lst.d_n):
            if any(ctx.c_h(unit_vector(lst.d_n, i), unit_vector(lst.d_n, j))):
                raise SplittingAbsent(f"c(eps^{i + 1}, eps^{j + 1}) has a component along t_h")
    for v in (v1, v2):
        _check_tangent(lst, v)
        if not t_f.lie_algebra().contains(v.dt):
            raise ShapeMismatch("dt must lie in the Lie algebra of T_f")
    zeta = vec(zeta)
    x1 = tuple(a + b for a, b in zip(v1.dt, scale(Fraction(1, 2), lst.frame.from_l(lst.c_n(v1.dzeta, zeta)))))
    x2 = tuple(a + b for a, b in zip(v2.dt, scale(Fraction(1, 2), lst.frame.from_l(lst.c_n(v2.dzeta, zeta)))))
    return lst.sigma_t.bilinear(v1.dt, v2.dt) + lst.pairing(v1.dzeta, x2) - lst.pairing(v2.dzeta, x1)
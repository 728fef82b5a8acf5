"""Invariants derived from a validated ingredient list."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from coisotropic.exact_linalg import (
    IntegerLattice,
    QMatrix,
    Vector,
    Infeasible,
    invariant_factors,
    solve_diophantine,
    to_int_vector,
    unit_vector,
    vec,
)
from coisotropic.forms import nu_nondegenerate
from coisotropic.holonomy import DimModuli, HolonomyMap, dim_moduli, equivalent, kernel_dims
from coisotropic.ingredients import IngredientList, canonicalize, dim_m
from coisotropic.nilgroup import GammaContext
from coisotropic.polytope import vertex_count
from coisotropic.torus import Subtorus, complement_shifted

logger = logging.getLogger(__name__)


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _context(lst: IngredientList, t_f: Subtorus | None) -> GammaContext:
    return GammaContext(lst, t_f) if t_f is not None else GammaContext.default(lst)


# --- Topology ---


def euler_characteristic(lst: IngredientList) -> int:
    if lst.dim_h != lst.d:
        return 0
    return vertex_count(lst.delta)


def is_hamiltonian(lst: IngredientList) -> bool:
    return lst.dim_h == lst.d


def is_hamiltonian_vector(lst: IngredientList, x: Sequence[object]) -> bool:
    """Whether the induced vector field of X is Hamiltonian, i.e. X lies in t_h."""
    return lst.t_h.lie_algebra().contains(vec(x))


def theta_lattice(lst: IngredientList, t_f: Subtorus | None = None) -> IntegerLattice:
    """Sublattice of (T_f)_Z generated by the values c_f(eps^l, eps^m)."""
    ctx = _context(lst, t_f)
    n = lst.d_n
    generators = [to_int_vector(ctx.c_f(unit_vector(n, i), unit_vector(n, j))) for i, j in _pairs(n)]
    return IntegerLattice.span(generators, ctx.d_f)


@dataclass(frozen=True)
class H1:
    """First homology ((T_f)_Z / Theta) x P as torsion factors and free rank."""

    torsion: tuple[int, ...]
    free_rank: int


def h1(lst: IngredientList, t_f: Subtorus | None = None) -> H1:
    ctx = _context(lst, t_f)
    theta = theta_lattice(lst, ctx.t_f)
    factors = invariant_factors(theta.matrix()) if theta.rank else ()
    return H1(tuple(f for f in factors if f > 1), ctx.d_f - theta.rank + lst.d_n)


def betti1(lst: IngredientList) -> int:
    return dim_m(lst) - 2 * lst.dim_h - theta_lattice(lst).rank


def pi1_abelian(lst: IngredientList) -> bool:
    lattice = lst.t_h.lattice
    return all(lattice.contains(lst.c_ambient(i, j)) for i, j in _pairs(lst.d_n))


def chern_forms(lst: IngredientList, t_f: Subtorus | None = None) -> tuple[QMatrix, ...]:
    """Matrices of the components c_h^j of c along the basis Y_j of the Hamiltonian lattice."""
    ctx = _context(lst, t_f)
    n = lst.d_n
    values = {(i, j): ctx.c_h(unit_vector(n, i), unit_vector(n, j)) for i in range(n) for j in range(n)}
    return tuple(
        QMatrix.from_rows([[values[i, j][k] for j in range(n)] for i in range(n)], n) for k in range(lst.dim_h)
    )


def aut_image_dim(lst: IngredientList) -> int:
    return kernel_dims(lst)[2]


# --- Splitting ---


@dataclass(frozen=True)
class SplittingObstruction:
    """The equation a = sum_j b_j m_ij that has no integer solution (1-based indices)."""

    pair: tuple[int, int]
    coordinate: int
    a: Fraction
    b: Vector


@dataclass(frozen=True)
class SplittingResult:
    feasible: bool
    t_f: Subtorus | None = None
    shift: QMatrix | None = None
    obstruction: SplittingObstruction | None = None


def splits_with(lst: IngredientList, t_f: Subtorus) -> bool:
    """Whether c(N x N) lies in the Lie algebra of the given complement."""
    ctx = GammaContext(lst, t_f)
    n = lst.d_n
    return not any(any(ctx.c_h(unit_vector(n, i), unit_vector(n, j))) for i, j in _pairs(n))


def splitting(lst: IngredientList) -> SplittingResult:
    """
    Search for a complement T_f of T_h whose Lie algebra contains every
    value of c. Complements are Z'_j = Z_j + sum_i m_ij Y_i; writing
    c^{lm} = sum_i a_i Y_i + sum_j b_j Z_j the condition is
    a_i = sum_j b_j m_ij, an integer linear system in m.
    """
    ctx = GammaContext.default(lst)
    dim_h, d_f, n = lst.dim_h, ctx.d_f, lst.d_n
    pairs = _pairs(n)
    rows: list[list[int]] = []
    rhs: list[int] = []
    labels: list[tuple[tuple[int, int], int, Fraction, Vector]] = []
    for i, j in pairs:
        u, v = unit_vector(n, i), unit_vector(n, j)
        a, b = ctx.c_h(u, v), ctx.c_f(u, v)
        for k in range(dim_h):
            row = [0] * (dim_h * d_f)
            for col in range(d_f):
                row[k * d_f + col] = int(b[col])
            rows.append(row)
            rhs.append(int(a[k]))
            labels.append(((i + 1, j + 1), k + 1, a[k], b))
    if not rows:
        return SplittingResult(True, ctx.t_f, QMatrix.zeros(dim_h, d_f))
    solution = solve_diophantine(QMatrix.from_rows(rows, dim_h * d_f), rhs)
    if isinstance(solution, Infeasible):
        pair, coordinate, a, b = labels[solution.row]
        logger.info("No complement contains c: equation for pair %s, coordinate %d is unsolvable", pair, coordinate)
        return SplittingResult(False, obstruction=SplittingObstruction(pair, coordinate, a, b))
    m = solution.particular
    shift = QMatrix.from_rows([m[k * d_f : (k + 1) * d_f] for k in range(dim_h)], d_f)
    return SplittingResult(True, complement_shifted(lst.t_h, shift, base=ctx.t_f), shift)


# --- Equality ---


def lists_equal(a: IngredientList, b: IngredientList) -> bool:
    """Same data up to the choice of P-basis and of holonomy representative."""
    ca, cb = canonicalize(a), canonicalize(b)
    if ca.structure_key() != cb.structure_key():
        return False
    return equivalent(HolonomyMap.of(ca), HolonomyMap.of(cb))


# --- Report ---


@dataclass(frozen=True)
class InvariantReport:
    dim_m: int
    dim_h: int
    d_n: int
    euler: int
    is_hamiltonian: bool
    pi1_abelian: bool
    h1: H1
    betti1: int
    theta_rank: int
    chern_forms: tuple[QMatrix, ...]
    dim_moduli: DimModuli
    splitting: SplittingResult
    aut_image_dim: int
    nu_nondegenerate: bool


def invariant_report(lst: IngredientList, t_f: Subtorus | None = None) -> InvariantReport:
    theta_rank = theta_lattice(lst, t_f).rank
    default_rank = theta_lattice(lst).rank
    if theta_rank != default_rank:
        logger.error(
            "Rank of Theta depends on the complement: %d for the given one, %d for the default",
            theta_rank, default_rank,
        )
    return InvariantReport(
        dim_m=dim_m(lst),
        dim_h=lst.dim_h,
        d_n=lst.d_n,
        euler=euler_characteristic(lst),
        is_hamiltonian=is_hamiltonian(lst),
        pi1_abelian=pi1_abelian(lst),
        h1=h1(lst, t_f),
        betti1=betti1(lst),
        theta_rank=theta_rank,
        chern_forms=chern_forms(lst, t_f),
        dim_moduli=dim_moduli(lst),
        splitting=splitting(lst),
        aut_image_dim=aut_image_dim(lst),
        nu_nondegenerate=nu_nondegenerate(lst, t_f),
    )

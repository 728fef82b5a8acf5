"""
Polyhedral orbit spaces.

A complete polyhedral parallel space is D / P with D = {v : f_i(v) >= c_i}
and P a lattice of translations preserving D. It splits as a polyhedron
times the torus span(P) / P once D is cut down to a complement of its
lineality space.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from coisotropic.errors import EmptyPolyhedron, PeriodsNotInLineality, ShapeMismatch
from coisotropic.exact_linalg import QMatrix, QSubspace, Vector, kernel_q, vec
from coisotropic.ingredients import IngredientList
from coisotropic.polytope import DelzantPolytope, Halfspace, Polyhedron
from coisotropic.schema import OrbitSpaceDocument

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PolyhedralParallelSpace:
    ambient_dim: int
    constraints: tuple[Halfspace, ...]
    period_basis: tuple[Vector, ...] = ()

    def __post_init__(self) -> None:
        n = self.ambient_dim
        for h in self.constraints:
            if len(h.normal) != n:
                raise ShapeMismatch(f"constraint form of length {len(h.normal)} in dimension {n}")
            if not any(h.normal):
                raise ShapeMismatch("constraint forms must be nonzero")
        periods = tuple(vec(p) for p in self.period_basis)
        if any(len(p) != n for p in periods):
            raise ShapeMismatch(f"periods must have {n} coordinates")
        if QSubspace.span(periods, n).dim != len(periods):
            raise ShapeMismatch("periods must be linearly independent")
        object.__setattr__(self, "period_basis", periods)

    @classmethod
    def from_document(cls, doc: OrbitSpaceDocument) -> "PolyhedralParallelSpace":
        constraints = tuple(Halfspace(vec(f), Fraction(c)) for f, c in zip(doc.forms, doc.offsets))
        return cls(doc.ambient_dim, constraints, tuple(vec(p) for p in doc.periods))

    def polyhedron(self) -> Polyhedron:
        return Polyhedron(self.ambient_dim, self.constraints)

    def contains(self, x: Sequence[object]) -> bool:
        return self.polyhedron().contains(vec(x))


def lineality(space: PolyhedralParallelSpace) -> QSubspace:
    """Common kernel of the constraint forms."""
    if not space.constraints:
        return QSubspace.full(space.ambient_dim)
    return kernel_q(QMatrix.from_rows([h.normal for h in space.constraints], space.ambient_dim))


def verify_periods(space: PolyhedralParallelSpace) -> bool:
    lin = lineality(space)
    return all(lin.contains(p) for p in space.period_basis)


@dataclass(frozen=True)
class Decomposition:
    """
    D = delta + lineality, with delta living on the coordinate subspace
    indexed by ``coordinates``.
    """

    delta: Polyhedron
    complement: QSubspace
    coordinates: tuple[int, ...]
    lineality: QSubspace
    compact: bool
    cocompact: bool
    vertices: tuple[Vector, ...]

    def split_point(self, x: Sequence[object]) -> tuple[Vector, Vector]:
        """Write x = c + l with c in the complement (restricted coordinates) and l in the lineality."""
        x = vec(x)
        shift = [Fraction(0)] * len(x)
        for row in self.lineality.basis:
            pivot = next(k for k, a in enumerate(row) if a)
            shift = [s + x[pivot] * a for s, a in zip(shift, row)]
        rest = tuple(a - b for a, b in zip(x, shift))
        return tuple(rest[k] for k in self.coordinates), tuple(shift)


def decompose(space: PolyhedralParallelSpace) -> Decomposition:
    if not verify_periods(space):
        raise PeriodsNotInLineality("a period vector does not preserve the constraints")
    n = space.ambient_dim
    lin = lineality(space)
    pivots = {next(k for k, a in enumerate(row) if a) for row in lin.basis}
    coordinates = tuple(k for k in range(n) if k not in pivots)
    constraints = tuple(
        Halfspace(tuple(h.normal[k] for k in coordinates), h.offset) for h in space.constraints
    )
    delta = Polyhedron(len(coordinates), constraints)
    if delta.is_empty():
        raise EmptyPolyhedron("the constraints of the parallel space admit no point")
    compact = delta.is_bounded()
    cocompact = QSubspace.span(space.period_basis, n).dim == lin.dim
    if not cocompact:
        logger.warning("Periods span %d of %d lineality directions", len(space.period_basis), lin.dim)
    complement = QSubspace.span([tuple(Fraction(int(j == k)) for j in range(n)) for k in coordinates], n)
    return Decomposition(
        delta=delta,
        complement=complement,
        coordinates=coordinates,
        lineality=lin,
        compact=compact,
        cocompact=cocompact,
        vertices=delta.vertices() if compact else (),
    )


# --- Orbit spaces of ingredient lists ---


@dataclass(frozen=True)
class OrbitSpace:
    delta: DelzantPolytope
    torus_rank: int


def orbit_space_of(lst: IngredientList) -> OrbitSpace:
    """M/T is Delta times the torus N/P."""
    return OrbitSpace(lst.delta, lst.d_n)


def parallel_space_of(lst: IngredientList) -> PolyhedralParallelSpace:
    """Delta x N in l*-coordinates dual to [Y | W], with the periods P."""
    dim_h, n = lst.dim_h, lst.d_n
    pad = (Fraction(0),) * n
    constraints = tuple(Halfspace(vec(f.normal) + pad, f.offset) for f in lst.delta.facets)
    periods = tuple((Fraction(0),) * dim_h + vec(p) for p in lst.p_basis)
    return PolyhedralParallelSpace(dim_h + n, constraints, periods)

"""
Exact convex polyhedra and Delzant polytopes.

Representations are converted with a desk-scale double description: every
choice of ``n`` vertices (or facets) is tried and the feasible ones kept.
That is plenty for the low-dimensional polytopes that occur as images of
Hamiltonian tori; ``COISO_MAX_POLYTOPE_DIM`` bounds the dimension.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from sympy import Rational
from sympy.solvers.simplex import InfeasibleLPError, linprog

from coisotropic.config import load_settings
from coisotropic.errors import NotFullDimensional, ShapeMismatch, Unbounded
from coisotropic.exact_linalg import (
    IntVector,
    QMatrix,
    Vector,
    as_fraction,
    dot,
    kernel_q,
    primitive,
    sub,
    vec,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Halfspace:
    """{x : normal . x >= offset}"""

    normal: Vector
    offset: Fraction

    def contains(self, x: Sequence[Fraction]) -> bool:
        return dot(self.normal, x) >= self.offset

    def is_tight(self, x: Sequence[Fraction]) -> bool:
        return dot(self.normal, x) == self.offset


@dataclass(frozen=True)
class Facet:
    """Facet with a primitive inward integer normal."""

    normal: IntVector
    offset: Fraction

    def as_halfspace(self) -> Halfspace:
        return Halfspace(vec(self.normal), self.offset)


@dataclass(frozen=True)
class Polyhedron:
    """Intersection of finitely many rational halfspaces, possibly unbounded."""

    dim: int
    constraints: tuple[Halfspace, ...]

    def __post_init__(self) -> None:
        for h in self.constraints:
            if len(h.normal) != self.dim:
                raise ShapeMismatch(f"constraint of length {len(h.normal)} in dimension {self.dim}")

    def contains(self, x: Sequence[Fraction]) -> bool:
        return all(h.contains(x) for h in self.constraints)

    def normal_matrix(self) -> QMatrix:
        return QMatrix.from_rows([h.normal for h in self.constraints], self.dim)

    def feasible_point(self) -> Vector | None:
        """Some point satisfying every constraint, or None when there is none."""
        if not self.constraints:
            return (Fraction(0),) * self.dim
        if self.dim == 0:
            return () if self.contains(()) else None
        a = [[Rational(-x.numerator, x.denominator) for x in h.normal] for h in self.constraints]
        b = [Rational(-h.offset.numerator, h.offset.denominator) for h in self.constraints]
        try:
            _, point = linprog([0] * self.dim, a, b, bounds=(None, None))
        except InfeasibleLPError:
            return None
        return tuple(as_fraction(x) for x in point)

    def is_empty(self) -> bool:
        return self.feasible_point() is None

    def recession_witness(self) -> Vector | None:
        """A nonzero direction r with x + s*r feasible for all s >= 0, if one exists; assumes a nonempty set."""
        n = self.dim
        if n == 0:
            return None
        a = self.normal_matrix()
        if a.rank() < n:
            return kernel_q(a).basis[0]
        normals = [h.normal for h in self.constraints]
        for rows in combinations(range(len(normals)), n - 1):
            kernel = kernel_q(QMatrix.from_rows([normals[i] for i in rows], n))
            if kernel.dim != 1:
                continue
            r = kernel.basis[0]
            values = [dot(a_i, r) for a_i in normals]
            if all(v >= 0 for v in values):
                return r
            if all(v <= 0 for v in values):
                return tuple(-x for x in r)
        return None

    def is_bounded(self) -> bool:
        return self.recession_witness() is None

    def vertices(self) -> tuple[Vector, ...]:
        """Vertices in lexicographic order (the polyhedron need not be bounded)."""
        n = self.dim
        if n == 0:
            return ((),) if self.contains(()) else ()
        found: set[Vector] = set()
        for rows in combinations(self.constraints, n):
            a = QMatrix.from_rows([h.normal for h in rows], n)
            if a.det() == 0:
                continue
            x = a.inverse().apply([h.offset for h in rows])
            if self.contains(x):
                found.add(x)
        return tuple(sorted(found))


# --- Representation conversion ---


def _check_dim(dim: int) -> None:
    limit = load_settings().max_polytope_dim
    if dim > limit:
        raise ShapeMismatch(f"polytope dimension {dim} exceeds COISO_MAX_POLYTOPE_DIM={limit}")


def affine_rank(points: Sequence[Vector]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    return QMatrix.from_rows([sub(p, base) for p in points[1:]], len(base)).rank()


def vrep_to_hrep(vertices: Iterable[Sequence[object]], dim: int) -> tuple[Facet, ...]:
    """Facets (primitive inward normals) of the convex hull, sorted lexicographically."""
    _check_dim(dim)
    points = sorted({vec(v) for v in vertices})
    for p in points:
        if len(p) != dim:
            raise ShapeMismatch(f"vertex {p} does not have {dim} coordinates")
    if dim == 0:
        if not points:
            raise NotFullDimensional("empty point set")
        return ()
    if not points or affine_rank(points) < dim:
        raise NotFullDimensional(f"points do not span a {dim}-dimensional polytope")
    facets: set[Facet] = set()
    for chosen in combinations(points, dim):
        base = chosen[0]
        kernel = kernel_q(QMatrix.from_rows([sub(p, base) for p in chosen[1:]], dim)) if dim > 1 else None
        if kernel is not None and kernel.dim != 1:
            continue
        normal = primitive(kernel.basis[0]) if kernel is not None else (1,)
        level = dot(normal, base)
        values = [dot(normal, p) for p in points]
        if min(values) == level:
            facets.add(Facet(normal, level))
        elif max(values) == level:
            facets.add(Facet(tuple(-a for a in normal), -level))
    return tuple(sorted(facets, key=lambda f: (f.normal, f.offset)))


def hrep_to_vrep(facets: Iterable[Facet], dim: int) -> tuple[Vector, ...]:
    _check_dim(dim)
    polyhedron = Polyhedron(dim, tuple(f.as_halfspace() for f in facets))
    if not polyhedron.is_bounded():
        raise Unbounded("facet description has a recession direction")
    points = polyhedron.vertices()
    if not points or affine_rank(points) < dim:
        raise NotFullDimensional(f"facets do not cut out a {dim}-dimensional polytope")
    return points


# --- Delzant polytopes ---


@dataclass(frozen=True)
class VertexReport:
    vertex: Vector
    tight_facets: tuple[int, ...]
    simple: bool
    normal_determinant: int | None
    edges: tuple[IntVector, ...]
    edge_determinant: int | None


@dataclass(frozen=True)
class DelzantCertificate:
    accepted: bool
    vertices: tuple[VertexReport, ...]

    def first_rejection(self) -> VertexReport | None:
        for report in self.vertices:
            if not report.simple or report.edge_determinant not in (1, -1):
                return report
        return None


@dataclass(frozen=True)
class DelzantPolytope:
    """
    Bounded full-dimensional polytope in (t_h)* with both representations.

    Construct with ``from_vertices`` or ``from_facets``; both keep the
    vertex and facet tuples in lexicographic order. A zero-dimensional
    polytope is the single point ().
    """

    dim_h: int
    vertices: tuple[Vector, ...]
    facets: tuple[Facet, ...]

    @classmethod
    def from_vertices(cls, points: Iterable[Sequence[object]], dim: int) -> "DelzantPolytope":
        facets = vrep_to_hrep(points, dim)
        return cls(dim, hrep_to_vrep(facets, dim) if dim else ((),), facets)

    @classmethod
    def from_facets(cls, facets: Iterable[Facet], dim: int) -> "DelzantPolytope":
        facets = tuple(sorted(facets, key=lambda f: (f.normal, f.offset)))
        vertices = hrep_to_vrep(facets, dim) if dim else ((),)
        # drop redundant inequalities
        return cls(dim, vertices, vrep_to_hrep(vertices, dim))

    @classmethod
    def point(cls) -> "DelzantPolytope":
        return cls(0, ((),), ())

    def contains(self, x: Sequence[object]) -> bool:
        x = vec(x)
        return all(dot(f.normal, x) >= f.offset for f in self.facets)

    def tight_facets(self, vertex: Vector) -> tuple[int, ...]:
        return tuple(i for i, f in enumerate(self.facets) if dot(f.normal, vertex) == f.offset)

    def edges_at(self, vertex: Vector) -> tuple[IntVector, ...] | None:
        """Primitive edge directions at a simple vertex, sorted; None at a non-simple vertex."""
        tight = self.tight_facets(vertex)
        if len(tight) != self.dim_h:
            return None
        if self.dim_h == 0:
            return ()
        a = QMatrix.from_rows([self.facets[i].normal for i in tight], self.dim_h)
        inv = a.inverse()
        return tuple(sorted(primitive(col) for col in inv.columns()))

    def transform(self, u: QMatrix) -> "DelzantPolytope":
        """Image under x -> u x for u in GL(dim_h, Z)."""
        if u.rows != self.dim_h or abs(u.det()) != 1 or not u.is_integral():
            raise ShapeMismatch("transform requires a unimodular integer matrix of matching size")
        if self.dim_h == 0:
            return self
        return DelzantPolytope.from_vertices([u.apply(v) for v in self.vertices], self.dim_h)

    def translate(self, shift: Sequence[object]) -> "DelzantPolytope":
        shift = vec(shift)
        vertices = tuple(tuple(a + b for a, b in zip(v, shift)) for v in self.vertices)
        facets = tuple(Facet(f.normal, f.offset + dot(f.normal, shift)) for f in self.facets)
        return DelzantPolytope(self.dim_h, vertices, tuple(sorted(facets, key=lambda f: (f.normal, f.offset))))


def is_delzant(p: DelzantPolytope) -> DelzantCertificate:
    reports = []
    for v in p.vertices:
        tight = p.tight_facets(v)
        edges = p.edges_at(v)
        if edges is None:
            reports.append(VertexReport(v, tight, False, None, (), None))
            continue
        normals = QMatrix.from_rows([p.facets[i].normal for i in tight], p.dim_h)
        edge_matrix = QMatrix.from_rows(edges, p.dim_h)
        reports.append(VertexReport(v, tight, True, int(normals.det()), edges, int(edge_matrix.det())))
    certificate = DelzantCertificate(True, tuple(reports))
    accepted = certificate.first_rejection() is None
    if not accepted:
        logger.info("Polytope rejected at vertex %s", certificate.first_rejection().vertex)
    return DelzantCertificate(accepted, tuple(reports))


# --- Centroid ---


def _triangulate(p: DelzantPolytope, face: frozenset[int], k: int, facet_sets: list[frozenset[int]]) -> list[tuple[int, ...]]:
    if k == 0:
        return [(min(face),)]
    apex = min(face)
    subfaces = set()
    for fs in facet_sets:
        candidate = face & fs
        if candidate == face or apex in candidate or not candidate:
            continue
        if affine_rank([p.vertices[i] for i in sorted(candidate)]) == k - 1:
            subfaces.add(candidate)
    simplices = []
    for ridge in sorted(subfaces, key=sorted):
        for s in _triangulate(p, ridge, k - 1, facet_sets):
            simplices.append((apex, *s))
    return simplices


def triangulate(p: DelzantPolytope) -> list[tuple[int, ...]]:
    """Pulling triangulation from the lexicographically first vertex, as vertex-index tuples."""
    facet_sets = [frozenset(i for i, v in enumerate(p.vertices) if dot(f.normal, v) == f.offset) for f in p.facets]
    return _triangulate(p, frozenset(range(len(p.vertices))), p.dim_h, facet_sets)


def simplex_volume(points: Sequence[Vector]) -> Fraction:
    """|det| of the edge matrix; proportional to the volume."""
    base = points[0]
    return abs(QMatrix.from_rows([sub(q, base) for q in points[1:]], len(base)).det())


def centroid(p: DelzantPolytope) -> Vector:
    if p.dim_h == 0:
        return ()
    if affine_rank(p.vertices) < p.dim_h:
        raise NotFullDimensional("centroid of a lower-dimensional polytope")
    total = Fraction(0)
    weighted = [Fraction(0)] * p.dim_h
    for simplex in triangulate(p):
        points = [p.vertices[i] for i in simplex]
        w = simplex_volume(points)
        total += w
        for k in range(p.dim_h):
            weighted[k] += w * sum(q[k] for q in points) / len(points)
    return tuple(x / total for x in weighted)


def translate_to_centered(p: DelzantPolytope) -> DelzantPolytope:
    c = centroid(p)
    if not any(c):
        return p
    return p.translate(tuple(-x for x in c))


def vertex_count(p: DelzantPolytope) -> int:
    return len(p.vertices)

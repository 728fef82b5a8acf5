"""
Exact rational and integer linear algebra.

Every other module sits on top of this one. Scalars are ``Fraction``;
Gaussian elimination over Q goes through ``sympy.Matrix`` and the Smith
normal form through sympy's ``DomainMatrix`` normal forms. The column
Hermite normal form is computed here because callers need the unimodular
transform along with the form.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

import sympy
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

from coisotropic.errors import NotSaturated, ShapeMismatch

logger = logging.getLogger(__name__)

Vector = tuple[Fraction, ...]
IntVector = tuple[int, ...]


# --- Scalars and vectors ---


def as_fraction(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, sympy.Basic):
        raise TypeError(f"not an exact rational: {value!r}")
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(value)  # type: ignore[arg-type]


def vec(values: Iterable[object]) -> Vector:
    return tuple(as_fraction(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(Fraction(1 if k == i else 0) for k in range(n))


def dot(u: Sequence[Fraction | int], v: Sequence[Fraction | int]) -> Fraction:
    if len(u) != len(v):
        raise ShapeMismatch(f"dot product of vectors of length {len(u)} and {len(v)}")
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def add(u: Sequence[Fraction | int], v: Sequence[Fraction | int]) -> Vector:
    if len(u) != len(v):
        raise ShapeMismatch(f"sum of vectors of length {len(u)} and {len(v)}")
    return tuple(Fraction(a) + b for a, b in zip(u, v))


def sub(u: Sequence[Fraction | int], v: Sequence[Fraction | int]) -> Vector:
    if len(u) != len(v):
        raise ShapeMismatch(f"difference of vectors of length {len(u)} and {len(v)}")
    return tuple(Fraction(a) - b for a, b in zip(u, v))


def scale(k: Fraction | int, v: Sequence[Fraction | int]) -> Vector:
    return tuple(Fraction(k) * a for a in v)


def is_integral(v: Iterable[Fraction | int]) -> bool:
    return all(Fraction(a).denominator == 1 for a in v)


def to_int_vector(v: Iterable[Fraction | int]) -> IntVector:
    out = []
    for a in v:
        a = Fraction(a)
        if a.denominator != 1:
            raise ValueError(f"entry {a} is not an integer")
        out.append(a.numerator)
    return tuple(out)


def common_denominator(v: Iterable[Fraction | int]) -> int:
    return reduce(lcm, (Fraction(a).denominator for a in v), 1)


def primitive(v: Sequence[Fraction | int]) -> IntVector:
    """Smallest positive integer multiple of ``v`` with coprime entries."""
    den = common_denominator(v)
    ints = [int(Fraction(a) * den) for a in v]
    g = reduce(gcd, (abs(a) for a in ints), 0)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(a // g for a in ints)


# --- Matrices ---


@dataclass(frozen=True)
class QMatrix:
    """Dense rational matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ShapeMismatch(f"negative shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise ShapeMismatch(
                f"{len(self.entries)} entries do not fill a {self.rows}x{self.cols} matrix"
            )
        object.__setattr__(self, "entries", tuple(as_fraction(e) for e in self.entries))

    # Construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], cols: int | None = None) -> "QMatrix":
        n_rows = len(rows)
        if cols is None:
            if n_rows == 0:
                raise ShapeMismatch("column count required for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ShapeMismatch(f"row of length {len(r)} in a matrix with {cols} columns")
        return cls(n_rows, cols, tuple(as_fraction(e) for r in rows for e in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[object]], rows: int) -> "QMatrix":
        for c in columns:
            if len(c) != rows:
                raise ShapeMismatch(f"column of length {len(c)} in a matrix with {rows} rows")
        return cls(rows, len(columns), tuple(as_fraction(columns[j][i]) for i in range(rows) for j in range(len(columns))))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, tuple(Fraction(1 if i == j else 0) for i in range(n) for j in range(n)))

    @classmethod
    def from_sympy(cls, m: sympy.Matrix) -> "QMatrix":
        return cls(m.rows, m.cols, tuple(as_fraction(e) for e in m))

    # Access

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> tuple[Vector, ...]:
        return tuple(self.row(i) for i in range(self.rows))

    def columns(self) -> tuple[Vector, ...]:
        return tuple(self.column(j) for j in range(self.cols))

    def int_rows(self) -> list[list[int]]:
        return [list(to_int_vector(r)) for r in self.to_rows()]

    def is_integral(self) -> bool:
        return is_integral(self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_antisymmetric(self) -> bool:
        return self.is_square() and all(
            self[i, j] == -self[j, i] for i in range(self.rows) for j in range(i, self.cols)
        )

    # Arithmetic

    def transpose(self) -> "QMatrix":
        return QMatrix.from_columns(self.to_rows(), self.cols) if self.rows else QMatrix.zeros(self.cols, 0)

    @property
    def T(self) -> "QMatrix":
        return self.transpose()

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        other_cols = other.columns()
        return QMatrix(
            self.rows,
            other.cols,
            tuple(dot(self.row(i), other_cols[j]) for i in range(self.rows) for j in range(other.cols)),
        )

    def apply(self, v: Sequence[Fraction | int]) -> Vector:
        """Matrix-vector product ``self @ v``."""
        if len(v) != self.cols:
            raise ShapeMismatch(f"cannot apply {self.rows}x{self.cols} matrix to a vector of length {len(v)}")
        return tuple(dot(self.row(i), v) for i in range(self.rows))

    def bilinear(self, u: Sequence[Fraction | int], v: Sequence[Fraction | int]) -> Fraction:
        """``u^T @ self @ v``."""
        return dot(u, self.apply(v))

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch("matrix sum of different shapes")
        return QMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "QMatrix":
        return QMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def scaled(self, k: Fraction | int) -> "QMatrix":
        return QMatrix(self.rows, self.cols, tuple(Fraction(k) * a for a in self.entries))

    def hstack(self, other: "QMatrix") -> "QMatrix":
        if self.rows != other.rows:
            raise ShapeMismatch("hstack of matrices with different row counts")
        return QMatrix.from_columns(self.columns() + other.columns(), self.rows)

    def select_columns(self, indices: Iterable[int]) -> "QMatrix":
        return QMatrix.from_columns([self.column(j) for j in indices], self.rows)

    # Gaussian elimination (sympy)

    def to_sympy(self) -> sympy.Matrix:
        return sympy.Matrix(
            self.rows, self.cols, [sympy.Rational(e.numerator, e.denominator) for e in self.entries]
        )

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return int(self.to_sympy().rank())

    def det(self) -> Fraction:
        if not self.is_square():
            raise ShapeMismatch(f"determinant of a non-square {self.rows}x{self.cols} matrix")
        if self.rows == 0:
            return Fraction(1)
        return as_fraction(self.to_sympy().det(method="bareiss"))

    def inverse(self) -> "QMatrix":
        if self.det() == 0:
            raise ValueError("matrix is singular")
        if self.rows == 0:
            return self
        return QMatrix.from_sympy(self.to_sympy().inv())

    def rref(self) -> tuple["QMatrix", tuple[int, ...]]:
        if self.rows == 0 or self.cols == 0:
            return self, ()
        m, pivots = self.to_sympy().rref()
        return QMatrix.from_sympy(m), tuple(int(p) for p in pivots)

    def solve(self, b: Sequence[Fraction | int]) -> Vector | None:
        """One rational solution of ``self @ x = b`` or None."""
        if len(b) != self.rows:
            raise ShapeMismatch("right-hand side length does not match row count")
        augmented = self.hstack(QMatrix.from_columns([b], self.rows))
        reduced, pivots = augmented.rref()
        if self.cols in pivots:
            return None
        x = [Fraction(0)] * self.cols
        for i, p in enumerate(pivots):
            x[p] = reduced[i, self.cols]
        return tuple(x)


def block_diagonal(*blocks: QMatrix) -> QMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [[Fraction(0)] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out[r0 + i][c0 + j] = b[i, j]
        r0 += b.rows
        c0 += b.cols
    return QMatrix.from_rows(out, cols)


# --- Subspaces and lattices ---


@dataclass(frozen=True)
class QSubspace:
    """Rational subspace of Q^n; ``basis`` holds the nonzero rows of the RREF."""

    ambient_dim: int
    basis: tuple[Vector, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence[object]], ambient_dim: int) -> "QSubspace":
        rows = [vec(v) for v in vectors]
        if not rows:
            return cls(ambient_dim, ())
        reduced, pivots = QMatrix.from_rows(rows, ambient_dim).rref()
        return cls(ambient_dim, tuple(reduced.row(i) for i in range(len(pivots))))

    @classmethod
    def full(cls, n: int) -> "QSubspace":
        return cls(n, tuple(unit_vector(n, i) for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> "QSubspace":
        return cls(n, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> QMatrix:
        """Basis vectors as columns."""
        return QMatrix.from_columns(self.basis, self.ambient_dim)

    def contains(self, v: Sequence[object]) -> bool:
        if len(v) != self.ambient_dim:
            raise ShapeMismatch(f"vector of length {len(v)} in a subspace of Q^{self.ambient_dim}")
        return QSubspace.span([*self.basis, v], self.ambient_dim).dim == self.dim

    def contains_subspace(self, other: "QSubspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def annihilator(self) -> "QSubspace":
        """Linear forms (as vectors) vanishing on this subspace."""
        if not self.basis:
            return QSubspace.full(self.ambient_dim)
        return kernel_q(QMatrix.from_rows(self.basis, self.ambient_dim))

    def __add__(self, other: "QSubspace") -> "QSubspace":
        return QSubspace.span([*self.basis, *other.basis], self.ambient_dim)


@dataclass(frozen=True)
class IntegerLattice:
    """
    Sublattice of Z^n given by a basis in column Hermite normal form.

    Build instances through ``span`` so the basis is canonical; two lattices
    are equal exactly when their bases are equal.
    """

    ambient_dim: int
    basis: tuple[IntVector, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence[object]], ambient_dim: int) -> "IntegerLattice":
        cols = [to_int_vector(v) for v in vectors]
        for c in cols:
            if len(c) != ambient_dim:
                raise ShapeMismatch(f"vector of length {len(c)} in Z^{ambient_dim}")
        if not cols:
            return cls(ambient_dim, ())
        h, _ = hnf(QMatrix.from_columns(cols, ambient_dim))
        return cls(ambient_dim, tuple(to_int_vector(c) for c in h.columns() if any(c)))

    @classmethod
    def full(cls, n: int) -> "IntegerLattice":
        return cls(n, tuple(to_int_vector(unit_vector(n, i)) for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> "IntegerLattice":
        return cls(n, ())

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> QMatrix:
        return QMatrix.from_columns(self.basis, self.ambient_dim)

    def rational_span(self) -> QSubspace:
        return QSubspace.span(self.basis, self.ambient_dim)

    def coordinates(self, v: Sequence[object]) -> IntVector | None:
        """Integer coordinates of ``v`` in the basis, or None if ``v`` is not in the lattice."""
        result = solve_diophantine(self.matrix(), to_int_vector(vec(v))) if is_integral(vec(v)) else None
        if result is None or isinstance(result, Infeasible):
            return None
        return result.particular

    def contains(self, v: Sequence[object]) -> bool:
        return self.coordinates(v) is not None

    def contains_lattice(self, other: "IntegerLattice") -> bool:
        return all(self.contains(b) for b in other.basis)

    def is_saturated(self) -> bool:
        return saturate(self) == self

    def index_in(self, sup: "IntegerLattice") -> int:
        """Index [sup : self] for a full-rank sublattice of the same rational span."""
        if not sup.contains_lattice(self) or self.rank != sup.rank:
            raise ValueError("not a finite-index sublattice")
        coords = [sup.coordinates(b) for b in self.basis]
        return abs(int(QMatrix.from_columns(coords, sup.rank).det()))


# --- Normal forms ---


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _combine_columns(m: list[list[int]], k: int, j: int, a: int, b: int, c: int, d: int) -> None:
    # (col_k, col_j) <- (a*col_k + b*col_j, c*col_k + d*col_j)
    for row in m:
        x, y = row[k], row[j]
        row[k] = a * x + b * y
        row[j] = c * x + d * y


def _hnf_lists(a: list[list[int]], n: int) -> tuple[list[list[int]], list[list[int]], list[int]]:
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    pivot_rows: list[int] = []
    k = 0
    for i in range(len(a)):
        if k == n:
            break
        for j in range(k + 1, n):
            if a[i][j] == 0:
                continue
            g, x, y = _xgcd(a[i][k], a[i][j])
            p, q = a[i][k] // g, a[i][j] // g
            _combine_columns(a, k, j, x, y, -q, p)
            _combine_columns(u, k, j, x, y, -q, p)
        pivot = a[i][k]
        if pivot == 0:
            continue
        if pivot < 0:
            for m in (a, u):
                for row in m:
                    row[k] = -row[k]
            pivot = -pivot
        for j in range(k):
            q = a[i][j] // pivot
            if q:
                for m in (a, u):
                    for row in m:
                        row[j] -= q * row[k]
        pivot_rows.append(i)
        k += 1
    return a, u, pivot_rows


def hnf(m: QMatrix) -> tuple[QMatrix, QMatrix]:
    """
    Column Hermite normal form.

    Returns ``(h, u)`` with ``h = m @ u``, ``u`` unimodular, positive
    pivots, zeros right of each pivot and entries left of a pivot reduced
    into ``[0, pivot)``. Zero columns come last.
    """
    if not m.is_integral():
        raise ValueError("hnf requires an integer matrix")
    h, u, _ = _hnf_lists(m.int_rows(), m.cols)
    return QMatrix.from_rows(h, m.cols), QMatrix.from_rows(u, m.cols)


def snf(m: QMatrix) -> tuple[QMatrix, QMatrix, QMatrix]:
    """
    Smith normal form ``d = u @ m @ v`` with a nonnegative divisibility chain.
    """
    if not m.is_integral():
        raise ValueError("snf requires an integer matrix")
    rows, cols = m.rows, m.cols
    if rows == 0 or cols == 0:
        return m, QMatrix.identity(rows), QMatrix.identity(cols)
    dm = DomainMatrix([[ZZ(x) for x in r] for r in m.int_rows()], (rows, cols), ZZ)
    d_dm, u_dm, v_dm = smith_normal_decomp(dm)
    d = [[int(x) for x in r] for r in d_dm.to_Matrix().tolist()]
    u = [[int(x) for x in r] for r in u_dm.to_Matrix().tolist()]
    v = [[int(x) for x in r] for r in v_dm.to_Matrix().tolist()]
    for i in range(min(rows, cols)):
        if d[i][i] < 0:
            d[i][i] = -d[i][i]
            u[i] = [-x for x in u[i]]
    return QMatrix.from_rows(d, cols), QMatrix.from_rows(u, rows), QMatrix.from_rows(v, cols)


def invariant_factors(m: QMatrix) -> tuple[int, ...]:
    """Nonzero diagonal entries of the Smith normal form."""
    d, _, _ = snf(m)
    return tuple(int(d[i, i]) for i in range(min(d.rows, d.cols)) if d[i, i] != 0)


def _transpose_hnf(sub: IntegerLattice) -> tuple[QMatrix, QMatrix]:
    # B^T u = [H0 | 0] with B the basis matrix of sub
    bt = QMatrix.from_rows(sub.basis, sub.ambient_dim)
    return hnf(bt)


def extend_to_zbasis(sub: IntegerLattice) -> QMatrix:
    """
    Integer columns completing the basis of a saturated lattice to a basis of Z^d.
    """
    r, d = sub.rank, sub.ambient_dim
    if r == 0:
        return QMatrix.identity(d)
    h, u = _transpose_hnf(sub)
    if any(h[i, j] != (1 if i == j else 0) for i in range(r) for j in range(r)):
        raise NotSaturated(f"lattice of rank {r} in Z^{d} is not saturated")
    w = u.inverse()
    return QMatrix.from_columns([w.row(i) for i in range(r, d)], d)


def saturate(sub: IntegerLattice) -> IntegerLattice:
    """(Q . sub) intersected with Z^d."""
    if sub.rank == 0:
        return sub
    _, u = _transpose_hnf(sub)
    w = u.inverse()
    return IntegerLattice.span([w.row(i) for i in range(sub.rank)], sub.ambient_dim)


def kernel_q(m: QMatrix) -> QSubspace:
    if m.rows == 0 or m.cols == 0:
        return QSubspace.full(m.cols)
    null = m.to_sympy().nullspace()
    return QSubspace.span([[as_fraction(e) for e in v] for v in null], m.cols)


def integral_basis(space: QSubspace) -> IntegerLattice:
    """The saturated lattice of integer points in a rational subspace."""
    scaled = [primitive(v) for v in space.basis]
    return saturate(IntegerLattice.span(scaled, space.ambient_dim))


# --- Diophantine systems ---


@dataclass(frozen=True)
class Infeasible:
    """No integer solution; ``row`` is the first equation that cannot be met."""

    row: int | None = None


@dataclass(frozen=True)
class DiophantineSolution:
    particular: IntVector
    homogeneous: IntegerLattice


def solve_diophantine(a: QMatrix, b: Sequence[int]) -> DiophantineSolution | Infeasible:
    """
    Solve ``a @ x = b`` over the integers.

    Only column operations are used, so the row reported by ``Infeasible``
    is a row of the caller's system.
    """
    if len(b) != a.rows:
        raise ShapeMismatch(f"right-hand side of length {len(b)} for {a.rows} equations")
    if not a.is_integral():
        raise ValueError("solve_diophantine requires an integer matrix")
    n = a.cols
    h, u, pivot_rows = _hnf_lists(a.int_rows(), n)
    r = len(pivot_rows)
    y = [0] * n
    k = 0
    for i in range(a.rows):
        s = sum(h[i][j] * y[j] for j in range(k))
        if k < r and pivot_rows[k] == i:
            q, rem = divmod(b[i] - s, h[i][k])
            if rem:
                return Infeasible(row=i)
            y[k] = q
            k += 1
        elif s != b[i]:
            return Infeasible(row=i)
    particular = tuple(sum(u[i][j] * y[j] for j in range(r)) for i in range(n))
    homogeneous = IntegerLattice.span([[u[i][j] for i in range(n)] for j in range(r, n)], n)
    return DiophantineSolution(particular, homogeneous)


def member_subspace_plus_lattice(v: Sequence[object], s: QSubspace, lat: IntegerLattice) -> bool:
    """Decide whether ``v`` lies in ``s + lat`` exactly."""
    v = vec(v)
    n = len(v)
    if s.ambient_dim != n or lat.ambient_dim != n:
        raise ShapeMismatch("subspace, lattice and vector live in different dimensions")
    forms = s.annihilator().basis
    if not forms:
        return True
    lattice_basis = lat.basis
    rows: list[list[int]] = []
    rhs: list[int] = []
    for f in forms:
        coeffs = [dot(f, k) for k in lattice_basis]
        target = dot(f, v)
        den = common_denominator([*coeffs, target])
        rows.append([int(c * den) for c in coeffs])
        rhs.append(int(target * den))
    if not lattice_basis:
        return all(t == 0 for t in rhs)
    system = QMatrix.from_rows(rows, len(lattice_basis))
    return not isinstance(solve_diophantine(system, rhs), Infeasible)

"""Tori, subtori and rational torus elements in the fixed coordinates T_Z = Z^d."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import floor

from coisotropic.errors import NotComplementary, NotSaturated, ShapeMismatch
from coisotropic.exact_linalg import (
    IntegerLattice,
    IntVector,
    QMatrix,
    QSubspace,
    Vector,
    extend_to_zbasis,
    member_subspace_plus_lattice,
    saturate,
    vec,
)

logger = logging.getLogger(__name__)


def _mod1(x: Fraction) -> Fraction:
    return x - floor(x)


@dataclass(frozen=True)
class Torus:
    dim: int


@dataclass(frozen=True)
class TorusElement:
    """Element exp(X) of T, stored as X mod Z^d with entries in [0, 1)."""

    coords: Vector

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(_mod1(c) for c in vec(self.coords)))

    @classmethod
    def identity(cls, dim: int) -> "TorusElement":
        return cls((Fraction(0),) * dim)

    @classmethod
    def exp(cls, x: Sequence[object]) -> "TorusElement":
        return cls(vec(x))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def is_identity(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "TorusElement") -> "TorusElement":
        if self.dim != other.dim:
            raise ShapeMismatch(f"torus elements of dimension {self.dim} and {other.dim}")
        return TorusElement(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "TorusElement":
        return TorusElement(tuple(-a for a in self.coords))

    def __sub__(self, other: "TorusElement") -> "TorusElement":
        return self + (-other)

    def scale(self, k: int) -> "TorusElement":
        return TorusElement(tuple(k * a for a in self.coords))


@dataclass(frozen=True)
class Subtorus:
    parent: Torus
    lattice: IntegerLattice

    def __post_init__(self) -> None:
        if self.lattice.ambient_dim != self.parent.dim:
            raise ShapeMismatch(
                f"lattice in Z^{self.lattice.ambient_dim} for a torus of dimension {self.parent.dim}"
            )
        if saturate(self.lattice) != self.lattice:
            raise NotSaturated("subtorus lattice must be saturated in Z^d")

    @classmethod
    def span(cls, torus: Torus, vectors: Sequence[Sequence[object]]) -> "Subtorus":
        return cls(torus, IntegerLattice.span(vectors, torus.dim))

    @classmethod
    def full(cls, torus: Torus) -> "Subtorus":
        return cls(torus, IntegerLattice.full(torus.dim))

    @classmethod
    def trivial(cls, torus: Torus) -> "Subtorus":
        return cls(torus, IntegerLattice.zero(torus.dim))

    @property
    def dim(self) -> int:
        return self.lattice.rank

    @property
    def basis(self) -> tuple[IntVector, ...]:
        return self.lattice.basis

    def lie_algebra(self) -> QSubspace:
        return self.lattice.rational_span()

    def contains_element(self, t: TorusElement) -> bool:
        return member_subspace_plus_lattice(t.coords, self.lie_algebra(), IntegerLattice.full(self.parent.dim))


# --- Complements ---


def complement(sub: Subtorus) -> Subtorus:
    completion = extend_to_zbasis(sub.lattice)
    return Subtorus.span(sub.parent, completion.columns())


def complement_shifted(sub: Subtorus, shift: QMatrix, base: Subtorus | None = None) -> Subtorus:
    """
    The complement with basis Z'_j = Z_j + sum_i shift[i, j] Y_i.

    Y is the basis of ``sub`` and Z the basis of ``base`` (default:
    ``complement(sub)``). Distinct integer shifts give distinct complements.
    """
    base = base or complement(sub)
    r, d = sub.dim, sub.parent.dim
    if (shift.rows, shift.cols) != (r, d - r):
        raise ShapeMismatch(f"shift must be {r}x{d - r}, got {shift.rows}x{shift.cols}")
    if not shift.is_integral():
        raise ShapeMismatch("shift must be an integer matrix")
    ys, zs = sub.basis, base.basis
    columns = []
    for j, z in enumerate(zs):
        columns.append(tuple(z[k] + sum(int(shift[i, j]) * ys[i][k] for i in range(r)) for k in range(d)))
    return Subtorus.span(sub.parent, columns)


def complement_matrix(u: Subtorus, v: Subtorus) -> QMatrix:
    """Square basis matrix [u | v]; raises unless it is unimodular."""
    if u.parent != v.parent:
        raise NotComplementary("subtori of different tori")
    d = u.parent.dim
    if u.dim + v.dim != d:
        raise NotComplementary(f"dimensions {u.dim} + {v.dim} do not add up to {d}")
    m = QMatrix.from_columns([*u.basis, *v.basis], d)
    if abs(m.det()) != 1:
        raise NotComplementary("lattices do not jointly form a basis of Z^d")
    return m


def split_element(t: TorusElement, u: Subtorus, v: Subtorus) -> tuple[TorusElement, TorusElement]:
    m = complement_matrix(u, v)
    x = m.inverse().apply(t.coords)
    d = u.parent.dim
    tu = [Fraction(0)] * d
    tv = [Fraction(0)] * d
    for i, y in enumerate(u.basis):
        for k in range(d):
            tu[k] += x[i] * y[k]
    for j, z in enumerate(v.basis):
        for k in range(d):
            tv[k] += x[u.dim + j] * z[k]
    return TorusElement(tuple(tu)), TorusElement(tuple(tv))


def lift(t: TorusElement) -> Vector:
    """Canonical lift of ``t`` to the Lie algebra (coordinates in [0, 1))."""
    return t.coords

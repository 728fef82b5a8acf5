"""
The list of ingredients of a symplectic torus action with coisotropic
principal orbits, its coordinate frame, and its validation.

Coordinates
-----------
T_Z is Z^d. The frame of a list is a unimodular basis [Y | W | V] of Z^d:

* Y is the Hermite basis of the Hamiltonian torus lattice,
* [Y | W] is a basis of the integer points of l = ker sigma_t,
* V completes it to a basis of Z^d.

Vectors of l are written in [Y | W] coordinates ("l-coordinates"). The
space N of forms on l vanishing on t_h is written in the basis dual to W
("N-coordinates"), so a form z pairs with X in l through the W-part of X.
The period lattice P is given by the rows p_l of an integer matrix in
N-coordinates and the cocycle c by its values on pairs of P-basis vectors.
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product

from coisotropic import holonomy
from coisotropic.errors import (
    IrrationalKernel,
    NotContained,
    PreconditionError,
    ShapeMismatch,
)
from coisotropic.exact_linalg import (
    IntegerLattice,
    IntVector,
    QMatrix,
    QSubspace,
    Vector,
    dot,
    extend_to_zbasis,
    hnf,
    integral_basis,
    is_integral,
    kernel_q,
    to_int_vector,
    vec,
    zero_vector,
)
from coisotropic.polytope import DelzantCertificate, DelzantPolytope, centroid, is_delzant
from coisotropic.torus import Subtorus, Torus, TorusElement

logger = logging.getLogger(__name__)


# --- Frame ---


@dataclass(frozen=True)
class Frame:
    torus_dim: int
    dim_h: int
    dim_l: int
    basis: QMatrix
    inverse: QMatrix

    @property
    def d_n(self) -> int:
        return self.dim_l - self.dim_h

    @property
    def y_basis(self) -> tuple[Vector, ...]:
        return self.basis.columns()[: self.dim_h]

    @property
    def w_basis(self) -> tuple[Vector, ...]:
        return self.basis.columns()[self.dim_h : self.dim_l]

    @property
    def v_basis(self) -> tuple[Vector, ...]:
        return self.basis.columns()[self.dim_l :]

    def coords(self, x: Sequence[object]) -> Vector:
        return self.inverse.apply(vec(x))

    def l_part(self, x: Sequence[object]) -> Vector:
        """l-coordinates of the projection of x to l along span V."""
        return self.coords(x)[: self.dim_l]

    def h_part(self, x: Sequence[object]) -> Vector:
        return self.coords(x)[: self.dim_h]

    def w_part(self, x: Sequence[object]) -> Vector:
        return self.coords(x)[self.dim_h : self.dim_l]

    def from_l(self, lc: Sequence[object]) -> Vector:
        """Ambient vector of an element of l given in l-coordinates."""
        lc = vec(lc)
        if len(lc) != self.dim_l:
            raise ShapeMismatch(f"l-coordinates of length {len(lc)}, expected {self.dim_l}")
        return self.basis.apply(lc + zero_vector(self.torus_dim - self.dim_l))

    def l_subspace(self) -> QSubspace:
        return QSubspace.span(self.basis.columns()[: self.dim_l], self.torus_dim)


def build_frame(sigma_t: QMatrix, sub: IntegerLattice) -> Frame:
    """
    Unimodular frame [Y | W | V] for the kernel of ``sigma_t`` and a
    saturated sublattice ``sub`` of it.
    """
    if not sigma_t.is_antisymmetric():
        raise IrrationalKernel("sigma_t is not antisymmetric")
    d = sigma_t.rows
    l_space = kernel_q(sigma_t)
    for y in sub.basis:
        if not l_space.contains(y):
            raise NotContained(f"vector {list(y)} is not in the kernel of sigma_t")
    l_lattice = integral_basis(l_space)
    dim_l = l_lattice.rank
    lb = l_lattice.matrix()
    y_coords = [to_int_vector(lb.solve(y)) for y in sub.basis]
    completion = extend_to_zbasis(IntegerLattice.span(y_coords, dim_l))
    w = [lb.apply(col) for col in completion.columns()]
    v = extend_to_zbasis(l_lattice).columns()
    basis = QMatrix.from_columns([*sub.basis, *w, *v], d)
    return Frame(d, sub.rank, dim_l, basis, basis.inverse())


@lru_cache(maxsize=256)
def frame_of(sigma_t: QMatrix, t_h: Subtorus) -> Frame:
    return build_frame(sigma_t, t_h.lattice)


# --- Ingredient list ---


CValues = tuple[tuple[Vector, ...], ...]


@dataclass(frozen=True)
class IngredientList:
    torus: Torus
    sigma_t: QMatrix
    t_h: Subtorus
    delta: DelzantPolytope
    p_basis: tuple[IntVector, ...]
    c_values: CValues
    tau_values: tuple[TorusElement, ...] = field(default=())

    @classmethod
    def create(
        cls,
        sigma_t: Sequence[Sequence[object]],
        t_h: Sequence[Sequence[int]] = (),
        delta_vertices: Sequence[Sequence[object]] = ((),),
        p_basis: Sequence[Sequence[int]] = (),
        c: Mapping[tuple[int, int], Sequence[object]] | None = None,
        tau: Sequence[Sequence[object]] | None = None,
    ) -> "IngredientList":
        """
        Build a list from plain data. ``c`` maps 0-based pairs (i, j) of
        P-basis indices to l-coordinates; the antisymmetric partner and
        missing pairs are filled in.
        """
        d = len(sigma_t)
        sigma = QMatrix.from_rows(sigma_t, d)
        torus = Torus(d)
        th = Subtorus.span(torus, t_h)
        delta = DelzantPolytope.from_vertices(delta_vertices, th.dim)
        dim_l = kernel_q(sigma).dim
        d_n = len(p_basis)
        c_values = antisymmetric_array(c or {}, d_n, dim_l)
        taus = tuple(TorusElement(vec(t)) for t in tau) if tau is not None else (TorusElement.identity(d),) * d_n
        return cls(torus, sigma, th, delta, tuple(to_int_vector(vec(p)) for p in p_basis), c_values, taus)

    @property
    def d(self) -> int:
        return self.torus.dim

    @property
    def dim_h(self) -> int:
        return self.t_h.dim

    @cached_property
    def frame(self) -> Frame:
        return frame_of(self.sigma_t, self.t_h)

    @property
    def dim_l(self) -> int:
        return self.frame.dim_l

    @property
    def d_n(self) -> int:
        return len(self.p_basis)

    @cached_property
    def p_matrix(self) -> QMatrix:
        return QMatrix.from_rows(self.p_basis, self.d_n)

    @cached_property
    def p_inverse(self) -> QMatrix:
        return self.p_matrix.inverse()

    def structure_key(self) -> tuple:
        """Everything except the holonomy."""
        return (self.sigma_t, self.t_h, self.delta, self.p_basis, self.c_values)

    # P, N and the cocycle

    def n_to_p(self, z: Sequence[object]) -> Vector:
        return self.p_inverse.transpose().apply(vec(z))

    def p_to_n(self, x: Sequence[object]) -> Vector:
        return self.p_matrix.transpose().apply(vec(x))

    def c_l(self, i: int, j: int) -> Vector:
        return self.c_values[i][j]

    def c_ambient(self, i: int, j: int) -> Vector:
        return self.frame.from_l(self.c_values[i][j])

    def c_p(self, u: Sequence[object], v: Sequence[object]) -> Vector:
        """c(u, v) in l-coordinates for u, v in P-coordinates (rational allowed)."""
        out = [Fraction(0)] * self.dim_l
        for i, a in enumerate(vec(u)):
            if not a:
                continue
            for j, b in enumerate(vec(v)):
                if not b or i == j:
                    continue
                for k, x in enumerate(self.c_values[i][j]):
                    out[k] += a * b * x
        return tuple(out)

    def c_n(self, z1: Sequence[object], z2: Sequence[object]) -> Vector:
        return self.c_p(self.n_to_p(z1), self.n_to_p(z2))

    def b_p(self, u: Sequence[object], v: Sequence[object]) -> Vector:
        """The bilinear map b(u, v) = sum_{l<m} u_l v_m c^{lm}, in l-coordinates."""
        out = [Fraction(0)] * self.dim_l
        u, v = vec(u), vec(v)
        for i in range(self.d_n):
            for j in range(i + 1, self.d_n):
                coeff = u[i] * v[j]
                if coeff:
                    for k, x in enumerate(self.c_values[i][j]):
                        out[k] += coeff * x
        return tuple(out)

    def pairing(self, z: Sequence[object], x: Sequence[object]) -> Fraction:
        """zeta(X_l) for zeta in N-coordinates and X an ambient vector."""
        return dot(vec(z), self.frame.w_part(x))

    def pairing_l(self, z: Sequence[object], lc: Sequence[object]) -> Fraction:
        """zeta(X) for X given in l-coordinates."""
        return dot(vec(z), vec(lc)[self.dim_h :])

    def epsilon(self, i: int, lc: Sequence[object]) -> Fraction:
        """The P-basis form eps^i applied to an element of l in l-coordinates."""
        return self.pairing_l(self.p_basis[i], lc)

    def expand_holonomy(self, values: Sequence[TorusElement], zeta: Sequence[int]) -> TorusElement:
        """exp(b(zeta, zeta)/2) * prod tau_l^{zeta_l} for zeta in P-coordinates."""
        exponent = [x / 2 for x in self.frame.from_l(self.b_p(zeta, zeta))]
        for z, t in zip(zeta, values):
            if z:
                exponent = [e + z * x for e, x in zip(exponent, t.coords)]
        return TorusElement(tuple(exponent))

    def default_complement(self) -> Subtorus:
        """span[W | V] of the frame, the complement used when none is given."""
        frame = self.frame
        return Subtorus.span(self.torus, [to_int_vector(v) for v in (*frame.w_basis, *frame.v_basis)])


def antisymmetric_array(pairs: Mapping[tuple[int, int], Sequence[object]], d_n: int, dim_l: int) -> CValues:
    array = [[zero_vector(dim_l) for _ in range(d_n)] for _ in range(d_n)]
    for (i, j), value in pairs.items():
        value = vec(value)
        if len(value) != dim_l:
            raise ShapeMismatch(f"c value for pair ({i}, {j}) has length {len(value)}, expected {dim_l}")
        if not (0 <= i < d_n and 0 <= j < d_n) or i == j:
            raise ShapeMismatch(f"c pair ({i}, {j}) is not a pair of distinct P-basis indices")
        array[i][j] = value
        array[j][i] = tuple(-x for x in value)
    return tuple(tuple(row) for row in array)


def dim_m(lst: IngredientList) -> int:
    return lst.d + lst.dim_l


# --- Validation ---


@dataclass(frozen=True)
class ValidationReport:
    antisymmetric: bool
    contained: bool
    delzant: bool
    centered: bool
    rank: bool
    integral: bool
    cyclic: bool
    hom_c: bool
    delzant_certificate: DelzantCertificate | None = None
    offending_pair: tuple[int, int] | None = None
    offending_triple: tuple[int, int, int] | None = None
    cyclic_value: Fraction | None = None
    hom_c_violation: tuple[IntVector, IntVector] | None = None
    homomorphic: bool | None = None
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(
            (self.antisymmetric, self.contained, self.delzant, self.centered, self.rank, self.integral, self.cyclic, self.hom_c)
        )


def _shape_problems(lst: IngredientList) -> list[str]:
    problems = []
    expected = lst.dim_l - lst.dim_h
    if lst.d_n != expected:
        problems.append(f"P has {lst.d_n} generators but dim N = {expected}")
    for p in lst.p_basis:
        if len(p) != lst.d_n:
            problems.append(f"P generator {list(p)} does not have {lst.d_n} N-coordinates")
    if len(lst.c_values) != lst.d_n or any(len(row) != lst.d_n for row in lst.c_values):
        problems.append("c is not a square array over the P-basis")
    elif any(len(v) != lst.dim_l for row in lst.c_values for v in row):
        problems.append(f"c values must have {lst.dim_l} l-coordinates")
    if len(lst.tau_values) != lst.d_n:
        problems.append(f"{len(lst.tau_values)} holonomy values for {lst.d_n} P-generators")
    elif any(t.dim != lst.d for t in lst.tau_values):
        problems.append(f"holonomy values must have {lst.d} coordinates")
    if not problems and lst.d_n and lst.p_matrix.rank() != lst.d_n:
        problems.append("P generators are linearly dependent")
    if not problems:
        for i in range(lst.d_n):
            if any(lst.c_values[i][i]) or any(
                a != -b for j in range(lst.d_n) for a, b in zip(lst.c_values[i][j], lst.c_values[j][i])
            ):
                problems.append("c is not antisymmetric")
                break
    return problems


def _find_non_integral(lst: IngredientList) -> tuple[int, int] | None:
    for i in range(lst.d_n):
        for j in range(i + 1, lst.d_n):
            if not is_integral(lst.c_ambient(i, j)):
                return (i + 1, j + 1)
    return None


def _find_cyclic_failure(lst: IngredientList) -> tuple[tuple[int, int, int], Fraction] | None:
    n = lst.d_n
    for a, b, c in product(range(n), repeat=3):
        total = lst.epsilon(a, lst.c_l(b, c)) + lst.epsilon(b, lst.c_l(c, a)) + lst.epsilon(c, lst.c_l(a, b))
        if total:
            return (a + 1, b + 1, c + 1), total
    return None


def validate(lst: IngredientList) -> ValidationReport:
    """
    Check every condition a list of ingredients must satisfy.

    Raises IrrationalKernel when sigma_t is not antisymmetric; every other
    failure is reported as a verdict.
    """
    if not lst.sigma_t.is_antisymmetric():
        raise IrrationalKernel("sigma_t is not antisymmetric")

    certificate = is_delzant(lst.delta)
    centered = not any(centroid(lst.delta))
    notes: list[str] = []
    verdicts = dict(antisymmetric=True, delzant=certificate.accepted, centered=centered, delzant_certificate=certificate)

    try:
        lst.frame
    except NotContained as exc:
        logger.info("Hamiltonian torus not contained in ker sigma_t: %s", exc)
        notes.append("the frame is undefined, so the conditions on P, c and tau were not evaluated")
        return ValidationReport(contained=False, rank=False, integral=False, cyclic=False, hom_c=False, notes=tuple(notes), **verdicts)

    problems = _shape_problems(lst)
    if problems:
        logger.info("Ingredient list has shape problems: %s", "; ".join(problems))
        return ValidationReport(
            contained=True, rank=False, integral=False, cyclic=False, hom_c=False, notes=tuple(problems), **verdicts
        )

    offending_pair = _find_non_integral(lst)
    cyclic = _find_cyclic_failure(lst)
    tau = holonomy.HolonomyMap.of(lst)
    violation = holonomy.find_hom_c_violation(tau)
    homomorphic = offending_pair is None and all(
        is_integral(x / 2 for x in lst.c_ambient(i, j)) for i in range(lst.d_n) for j in range(i + 1, lst.d_n)
    )
    if lst.d_n <= 1:
        notes.append("dim N <= 1, so c vanishes identically")
    report = ValidationReport(
        contained=True,
        rank=True,
        integral=offending_pair is None,
        cyclic=cyclic is None,
        hom_c=violation is None,
        offending_pair=offending_pair,
        offending_triple=cyclic[0] if cyclic else None,
        cyclic_value=cyclic[1] if cyclic else None,
        hom_c_violation=violation,
        homomorphic=homomorphic,
        notes=tuple(notes),
        **verdicts,
    )
    if not report.passed:
        logger.info(
            "Validation failed: delzant=%s centered=%s integral=%s cyclic=%s hom_c=%s",
            report.delzant, report.centered, report.integral, report.cyclic, report.hom_c,
        )
    return report


def require_valid(lst: IngredientList) -> IngredientList:
    report = validate(lst)
    if not report.passed:
        raise PreconditionError("ingredient list does not pass validation")
    return lst


# --- Canonical form ---


def rebase_p(lst: IngredientList, u: QMatrix) -> IngredientList:
    """
    Re-express P, c and tau in the basis eps'^a = sum_l u[l, a] eps^l.
    """
    n = lst.d_n
    if (u.rows, u.cols) != (n, n) or not u.is_integral() or abs(u.det()) != 1:
        raise ShapeMismatch("rebase_p needs a unimodular integer matrix of size d_N")
    columns = [to_int_vector(u.column(a)) for a in range(n)]
    p_basis = tuple(to_int_vector(lst.p_to_n(col)) for col in columns)
    pairs = {(a, b): lst.c_p(columns[a], columns[b]) for a in range(n) for b in range(a + 1, n)}
    tau = holonomy.HolonomyMap.of(lst)
    taus = tuple(holonomy.tau_of(tau, col) for col in columns)
    return replace(lst, p_basis=p_basis, c_values=antisymmetric_array(pairs, n, lst.dim_l), tau_values=taus)


def canonicalize(lst: IngredientList) -> IngredientList:
    """
    Canonical presentation: P in column Hermite form, c and tau rebased to
    match. The Hamiltonian lattice, the polytope and the holonomy
    coordinates are already canonical by construction.
    """
    if lst.d_n == 0:
        return lst
    _, u = hnf(QMatrix.from_columns(lst.p_basis, lst.d_n))
    return rebase_p(lst, u)

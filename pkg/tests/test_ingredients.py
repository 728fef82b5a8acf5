from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coisotropic.errors import IrrationalKernel, PreconditionError
from coisotropic.exact_linalg import QMatrix
from coisotropic.ingredients import (
    IngredientList,
    canonicalize,
    dim_m,
    rebase_p,
    require_valid,
    validate,
)

from tests.strategies import ingredient_lists, unimodular

ZERO2 = [[0, 0], [0, 0]]
ZERO3 = [[0] * 3 for _ in range(3)]
CENTERED_SIMPLEX = [
    [Fraction(-1, 3), Fraction(-1, 3)],
    [Fraction(2, 3), Fraction(-1, 3)],
    [Fraction(-1, 3), Fraction(2, 3)],
]


def test_fixtures_validate(thurston, thurston_c0, delzant_cp2, benoist):
    for lst in (thurston, thurston_c0, delzant_cp2, benoist):
        assert validate(lst).passed


def test_thurston_frame_is_standard(thurston):
    assert thurston.frame.basis == QMatrix.identity(2)
    assert thurston.dim_l == 2
    assert thurston.d_n == 2


def test_non_integral_cocycle():
    lst = IngredientList.create(ZERO2, p_basis=[[1, 0], [0, 1]], c={(0, 1): [Fraction(1, 2), 0]})
    report = validate(lst)
    assert not report.integral
    assert report.offending_pair == (1, 2)
    assert not report.passed


def test_cyclic_identity_failure():
    lst = IngredientList.create(ZERO3, p_basis=[[1, 0, 0], [0, 1, 0], [0, 0, 1]], c={(0, 1): [0, 0, 1]})
    report = validate(lst)
    assert report.integral
    assert not report.cyclic
    assert report.offending_triple == (1, 2, 3)
    assert report.cyclic_value == 1


def test_cyclic_verdict_ignores_p_basis():
    lst = IngredientList.create(ZERO3, p_basis=[[1, 0, 0], [0, 1, 0], [0, 0, 1]], c={(0, 1): [0, 0, 1]})
    u = QMatrix.from_rows([[1, 2, 0], [0, 1, 0], [0, 3, 1]])
    assert not validate(rebase_p(lst, u)).cyclic


def test_hamiltonian_torus_outside_kernel():
    lst = IngredientList.create([[0, 1], [-1, 0]], t_h=[[1, 0]], delta_vertices=[[-1], [1]])
    report = validate(lst)
    assert not report.contained
    assert not report.passed
    assert report.notes


def test_non_antisymmetric_sigma_raises():
    lst = IngredientList.create([[0, 1], [0, 0]])
    with pytest.raises(IrrationalKernel):
        validate(lst)


def test_non_delzant_polytope():
    # conv{0, e1, 2e2} moved to its centroid
    vertices = [[Fraction(-1, 3), Fraction(-2, 3)], [Fraction(2, 3), Fraction(-2, 3)], [Fraction(-1, 3), Fraction(4, 3)]]
    report = validate(IngredientList.create(ZERO2, t_h=[[1, 0], [0, 1]], delta_vertices=vertices))
    assert report.centered
    assert not report.delzant
    assert report.delzant_certificate.first_rejection().edge_determinant in (2, -2)


def test_uncentered_polytope():
    report = validate(IngredientList.create(ZERO2, t_h=[[1, 0], [0, 1]], delta_vertices=[[0, 0], [1, 0], [0, 1]]))
    assert report.delzant
    assert not report.centered


def test_wrong_number_of_periods():
    report = validate(IngredientList.create(ZERO2, p_basis=[[1, 0]]))
    assert not report.rank
    assert report.notes


def test_homomorphic_flag(thurston, thurston_c0):
    assert validate(thurston).homomorphic is False
    assert validate(thurston_c0).homomorphic is True


def test_small_n_note():
    lst = IngredientList.create([[0, 1, 0], [-1, 0, 0], [0, 0, 0]], p_basis=[[1]])
    report = validate(lst)
    assert report.passed
    assert any("dim N" in note for note in report.notes)


def test_require_valid(thurston):
    assert require_valid(thurston) is thurston
    broken = IngredientList.create(ZERO2, p_basis=[[1, 0], [0, 1]], c={(0, 1): [Fraction(1, 3), 0]})
    with pytest.raises(PreconditionError):
        require_valid(broken)


def test_dim_m():
    assert dim_m(IngredientList.create(ZERO2, p_basis=[[1, 0], [0, 1]])) == 4
    assert dim_m(IngredientList.create(ZERO2, t_h=[[1, 0], [0, 1]], delta_vertices=CENTERED_SIMPLEX)) == 4
    assert dim_m(IngredientList.create([[0, 1, 0], [-1, 0, 0], [0, 0, 0]], p_basis=[[1]])) == 4


def test_canonical_form_of_thurston(thurston):
    assert canonicalize(thurston) == thurston


def test_vertex_order_does_not_matter():
    a = IngredientList.create(ZERO2, t_h=[[1, 0], [0, 1]], delta_vertices=CENTERED_SIMPLEX)
    b = IngredientList.create(ZERO2, t_h=[[1, 0], [0, 1]], delta_vertices=CENTERED_SIMPLEX[::-1])
    assert canonicalize(a) == canonicalize(b)


def test_rebase_p_moves_holonomy(thurston):
    u = QMatrix.from_rows([[1, 1], [0, 1]])
    rebased = rebase_p(thurston, u)
    assert rebased.p_basis == ((1, 0), (1, 1))
    # tau at eps^1 + eps^2 picks up exp(c^{12}/2)
    assert rebased.tau_values[1].coords == (Fraction(1, 2), 0)
    assert canonicalize(rebased) == thurston


@given(ingredient_lists())
def test_generated_lists_are_valid(lst):
    report = validate(lst)
    assert report.passed, report


@given(ingredient_lists())
def test_canonicalize_is_idempotent(lst):
    once = canonicalize(lst)
    assert canonicalize(once) == once
    assert validate(once).passed


@given(ingredient_lists(), st.data())
def test_validation_survives_rebasing(lst, data):
    u = data.draw(unimodular(lst.d_n)) if lst.d_n else QMatrix.zeros(0, 0)
    rebased = rebase_p(lst, u)
    assert validate(rebased).passed
    assert canonicalize(rebased) == canonicalize(lst)

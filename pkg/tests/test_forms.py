from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coisotropic.errors import OracleMissing, ShapeMismatch, SingularChart, SplittingAbsent
from coisotropic.exact_linalg import QMatrix
from coisotropic.forms import (
    DelzantOracle,
    LocalTangent,
    StabilizerChart,
    Tangent,
    a_iso,
    a_iso_inverse,
    local_form_eval,
    nu_matrix,
    nu_nondegenerate,
    omega_eval,
    sigma_f_eval,
)
from coisotropic.ingredients import IngredientList

from tests.strategies import ingredient_lists, rational_points, small_fractions

ZERO2 = QMatrix.zeros(2, 2)
RANK2_SIGMA = QMatrix.from_rows([[0, 1, 0], [-1, 0, 0], [0, 0, 0]])


@st.composite
def tangents(draw, lst):
    return Tangent(draw(rational_points(lst.d)), draw(rational_points(lst.d_n)))


@st.composite
def oracles(draw, lst):
    return DelzantOracle(draw(rational_points(lst.dim_h)), draw(rational_points(lst.dim_h)), draw(small_fractions))


# --- The form on T x N x M_h ---


def test_omega_pairs_torus_with_periods(thurston):
    value = omega_eval(thurston, (0, 0), Tangent((1, 0), (0, 0)), Tangent((0, 0), (1, 0)))
    assert value == -1


def test_omega_depends_on_zeta_through_cocycle(thurston):
    da, d2a = Tangent((0, 0), (1, 0)), Tangent((0, 0), (0, 1))
    assert omega_eval(thurston, (0, 0), da, d2a) == 0
    assert omega_eval(thurston, (2, 0), da, d2a) == -1


def test_omega_needs_oracle(benoist):
    v = Tangent((0, 0, 0, 0), (0, 0))
    with pytest.raises(OracleMissing):
        omega_eval(benoist, (0, 0), v, v, mu=(0, 0))


def test_omega_checks_mu(benoist):
    v = Tangent((0, 0, 0, 0), (0, 0))
    with pytest.raises(ShapeMismatch):
        omega_eval(benoist, (0, 0), v, v, mu=(0,), oracle=DelzantOracle((0, 0), (0, 0)))


def test_omega_momentum_term(benoist):
    da, d2a = Tangent((0, 0, 0, 0), (1, 0)), Tangent((0, 0, 0, 0), (0, 1))
    oracle = DelzantOracle((0, 0), (0, 0))
    assert omega_eval(benoist, (0, 0), da, d2a, mu=(Fraction(1, 3), 0), oracle=oracle) == Fraction(-1, 3)


@given(ingredient_lists(max_dim=3), st.data())
def test_omega_is_antisymmetric(lst, data):
    da, d2a = data.draw(tangents(lst)), data.draw(tangents(lst))
    zeta = data.draw(rational_points(lst.d_n))
    mu = data.draw(rational_points(lst.dim_h))
    oracle = data.draw(oracles(lst)) if lst.dim_h else None
    swapped = oracle.swapped() if oracle else None
    forward = omega_eval(lst, zeta, da, d2a, mu, oracle)
    assert forward == -omega_eval(lst, zeta, d2a, da, mu, swapped)


# --- Constant forms on t_f x N ---


def test_nu_matrix_of_thurston(thurston):
    identity = QMatrix.identity(2)
    zero = QMatrix.zeros(2, 2)
    expected = QMatrix.from_rows(
        [[*zero.row(i), *(-identity).row(i)] for i in range(2)] + [[*identity.row(i), *zero.row(i)] for i in range(2)]
    )
    assert nu_matrix(thurston) == expected
    assert nu_nondegenerate(thurston)


def test_nu_on_benoist_and_delzant(benoist, delzant_cp2):
    assert nu_matrix(benoist).rows == 4
    assert nu_nondegenerate(benoist)
    assert nu_matrix(delzant_cp2).rows == 0


@given(ingredient_lists(max_dim=3))
def test_nu_matrix_is_antisymmetric(lst):
    m = nu_matrix(lst)
    assert m.T == -m


def test_sigma_f_requires_splitting(benoist):
    v = Tangent((0, 0, 0, 0), (0, 0))
    with pytest.raises(SplittingAbsent):
        sigma_f_eval(benoist, benoist.default_complement(), (0, 0), v, v)


def test_sigma_f_requires_dt_in_complement():
    lst = IngredientList.create([[0, 0], [0, 0]], t_h=[[1, 0]], delta_vertices=[[-1], [1]], p_basis=[[1]])
    with pytest.raises(ShapeMismatch):
        sigma_f_eval(lst, lst.default_complement(), (0,), Tangent((1, 0), (0,)), Tangent((0, 1), (0,)))


@given(ingredient_lists(max_dim=3, with_hamiltonian=False), st.data())
def test_sigma_f_agrees_with_omega_without_hamiltonian_part(lst, data):
    da, d2a = data.draw(tangents(lst)), data.draw(tangents(lst))
    zeta = data.draw(rational_points(lst.d_n))
    assert sigma_f_eval(lst, lst.default_complement(), zeta, da, d2a) == omega_eval(lst, zeta, da, d2a)


# --- Local model ---


def test_chart_rejects_bad_stabilizers():
    with pytest.raises(SingularChart):
        StabilizerChart(ZERO2, ((2, 0),))
    with pytest.raises(SingularChart):
        StabilizerChart(ZERO2, ((1, 0), (2, 0)))
    chart = StabilizerChart(RANK2_SIGMA, ((1, 0, 0),))
    with pytest.raises(SingularChart):
        a_iso(chart, (), (1,))


def test_a_iso_on_plane():
    chart = StabilizerChart(ZERO2, ((1, 0),))
    assert a_iso(chart, (3,), (5,)) == (5, 3)
    assert a_iso_inverse(chart, (5, 3)) == ((3,), (5,))


def test_a_iso_inverse_checks_length():
    chart = StabilizerChart(ZERO2, ((1, 0),))
    with pytest.raises(ShapeMismatch):
        a_iso_inverse(chart, (1,))


@pytest.mark.parametrize(
    "sigma, x_basis",
    [
        (ZERO2, ((1, 1),)),
        (QMatrix.zeros(3, 3), ((1, 2, 0), (0, 1, 1))),
        (RANK2_SIGMA, ((0, 0, 1),)),
    ],
)
def test_a_iso_round_trip(sigma, x_basis):
    chart = StabilizerChart(sigma, x_basis)
    dlam = tuple(Fraction(k + 1, 2) for k in range(chart.frame.d_n))
    drho = tuple(Fraction(-k, 3) for k in range(chart.m))
    assert a_iso_inverse(chart, a_iso(chart, dlam, drho)) == (dlam, drho)


def test_local_form():
    chart = StabilizerChart(ZERO2, ((1, 0),))
    v1 = LocalTangent((0, 0), (1,), (0,), (0,))
    v2 = LocalTangent((0, 1), (0,), (1,), (0,))
    assert local_form_eval(chart, v1, v2) == 1
    assert local_form_eval(chart, v2, v1) == -1
    with pytest.raises(ShapeMismatch):
        local_form_eval(chart, v1, LocalTangent((0, 1), (0, 0), (1,), (0,)))

from dataclasses import replace
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coisotropic.errors import Condition5aViolated, FrameMismatch, ShapeMismatch
from coisotropic.holonomy import (
    HolonomyMap,
    dim_moduli,
    equivalent,
    find_hom_c_violation,
    make_hom_c,
    space_a_basis,
    tau_of,
    twist,
    twist_by_a,
    verify_hom_c,
)
from coisotropic.ingredients import IngredientList
from coisotropic.torus import TorusElement

from tests.strategies import free_lists, ingredient_lists, rational_points

half = Fraction(1, 2)
ZERO2 = [[0, 0], [0, 0]]
RANK2_SIGMA = [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]


def _identity_values(lst):
    return [TorusElement.identity(lst.d)] * lst.d_n


def test_tau_of_basis_vectors(thurston):
    tau = HolonomyMap.of(thurston)
    assert tau_of(tau, (1, 0)).is_identity()
    assert tau_of(tau, (0, 0)).is_identity()


def test_tau_of_sum_picks_up_half_cocycle(thurston):
    tau = HolonomyMap.of(thurston)
    assert tau_of(tau, (1, 1)).coords == (half, 0)
    assert tau_of(tau, (2, 0)).is_identity()


def test_tau_of_checks_shape(thurston):
    with pytest.raises(ShapeMismatch):
        tau_of(HolonomyMap.of(thurston), (1, 0, 0))


def test_expansion_satisfies_relation(thurston, benoist):
    for lst in (thurston, benoist):
        assert verify_hom_c(HolonomyMap.of(lst))


def test_override_breaks_relation(thurston):
    tau = HolonomyMap.of(thurston).with_override((1, 1), TorusElement.identity(2))
    assert tau_of(tau, (1, 1)).is_identity()
    assert not verify_hom_c(tau)
    assert find_hom_c_violation(tau, word_length=2) is not None


def test_make_hom_c_requires_integral_cocycle():
    lst = IngredientList.create(ZERO2, p_basis=[[1, 0], [0, 1]], c={(0, 1): [half, 0]})
    with pytest.raises(Condition5aViolated):
        make_hom_c(lst, _identity_values(lst))


def test_make_hom_c_checks_count(thurston):
    with pytest.raises(ShapeMismatch):
        make_hom_c(thurston, [TorusElement.identity(2)])


def test_twist_moves_overrides(thurston):
    tau = HolonomyMap.of(thurston).with_override((1, 1), TorusElement((half, 0)))
    h = [TorusElement((0, half)), TorusElement((0, half))]
    twisted = twist(tau, h)
    assert twisted.values[0].coords == (0, half)
    assert tau_of(twisted, (1, 1)).coords == (half, 0)
    assert verify_hom_c(twisted)


def test_twist_by_a_checks_length(thurston):
    with pytest.raises(ShapeMismatch):
        twist_by_a(HolonomyMap.of(thurston), [0, 0, 0])


@pytest.mark.parametrize(
    "sigma, p_basis, expected",
    [
        ([[0]], [[1]], 1),
        (ZERO2, [[1, 0], [0, 1]], 3),
        (RANK2_SIGMA, [[1]], 1),
    ],
)
def test_space_a_dimension(sigma, p_basis, expected):
    assert space_a_basis(IngredientList.create(sigma, p_basis=p_basis)).dim == expected


def test_space_a_of_thurston_is_everything(thurston):
    assert space_a_basis(thurston).dim == 4


def test_thurston_holonomies_are_all_equivalent(thurston):
    other = replace(thurston, tau_values=(TorusElement((0, half)), TorusElement.identity(2)))
    assert equivalent(HolonomyMap.of(thurston), HolonomyMap.of(other))


def test_holonomy_not_in_a_is_not_equivalent(thurston_c0):
    other = replace(thurston_c0, tau_values=(TorusElement((0, half)), TorusElement.identity(2)))
    assert not equivalent(HolonomyMap.of(thurston_c0), HolonomyMap.of(other))


def test_equivalence_needs_same_frame(thurston, benoist):
    with pytest.raises(FrameMismatch):
        equivalent(HolonomyMap.of(thurston), HolonomyMap.of(benoist))


@pytest.mark.parametrize(
    "sigma, p_basis, direct",
    [
        (ZERO2, [[1, 0], [0, 1]], 1),
        (RANK2_SIGMA, [[1]], 2),
        ([[0]], [[1]], 0),
    ],
)
def test_dim_moduli_examples(sigma, p_basis, direct):
    result = dim_moduli(IngredientList.create(sigma, p_basis=p_basis))
    assert result.direct == direct
    assert result.formula_crosscheck == direct


def test_dim_moduli_of_thurston(thurston):
    result = dim_moduli(thurston)
    assert result.direct == 0
    assert result.formula_crosscheck == 0
    assert result.c_annihilator == 1


def test_dim_moduli_without_periods(delzant_cp2):
    result = dim_moduli(delzant_cp2)
    assert result.direct == 0
    assert result.formula_crosscheck is None


@settings(max_examples=50)
@given(free_lists())
def test_formula_matches_direct_count(lst):
    result = dim_moduli(lst)
    assert result.formula_crosscheck == result.direct


@settings(max_examples=100)
@given(ingredient_lists(), st.data())
def test_twist_by_a_is_equivalent(lst, data):
    a = space_a_basis(lst)
    coeffs = data.draw(st.lists(st.integers(-2, 2), min_size=len(a.generators), max_size=len(a.generators)))
    alpha = [Fraction(0)] * (lst.d * lst.d_n)
    for k, g in zip(coeffs, a.generators):
        alpha = [x + Fraction(k, 3) * y for x, y in zip(alpha, g)]
    tau = HolonomyMap.of(lst)
    assert equivalent(tau, twist_by_a(tau, alpha))


@settings(max_examples=100)
@given(ingredient_lists(max_dim=3), st.data())
def test_equivalence_is_symmetric(lst, data):
    values = [TorusElement(data.draw(rational_points(lst.d))) for _ in range(lst.d_n)]
    tau = HolonomyMap.of(lst)
    other = make_hom_c(lst, values)
    assert equivalent(tau, other) == equivalent(other, tau)
    assert equivalent(tau, tau)


@settings(max_examples=100)
@given(ingredient_lists(max_dim=3), st.data())
def test_twisted_maps_keep_relation(lst, data):
    h = [TorusElement(data.draw(rational_points(lst.d))) for _ in range(lst.d_n)]
    assert verify_hom_c(twist(HolonomyMap.of(lst), h))


def _a_element(lst, data):
    a = space_a_basis(lst)
    coeffs = data.draw(st.lists(st.integers(-3, 3), min_size=len(a.generators), max_size=len(a.generators)))
    alpha = [Fraction(0)] * (lst.d * lst.d_n)
    for k, g in zip(coeffs, a.generators):
        alpha = [x + Fraction(k, 4) * y for x, y in zip(alpha, g)]
    return alpha


@settings(max_examples=100)
@given(ingredient_lists(max_dim=3), st.data())
def test_equivalence_is_transitive(lst, data):
    tau = HolonomyMap.of(lst)
    middle = twist_by_a(tau, _a_element(lst, data))
    last = twist_by_a(middle, _a_element(lst, data))
    assert equivalent(tau, middle) and equivalent(middle, last)
    assert equivalent(tau, last)
    other = make_hom_c(lst, [TorusElement(data.draw(rational_points(lst.d))) for _ in range(lst.d_n)])
    assert equivalent(tau, other) == equivalent(middle, other) == equivalent(last, other)


@settings(max_examples=100)
@given(ingredient_lists(max_dim=3), st.data())
def test_product_relation_on_a_box(lst, data):
    tau = HolonomyMap.of(lst)
    box = range(-3, 4)
    others = data.draw(st.lists(st.tuples(*[st.sampled_from(box)] * lst.d_n), min_size=1, max_size=3))
    for zeta in product(box, repeat=lst.d_n):
        for other in others:
            total = tuple(a + b for a, b in zip(zeta, other))
            half_c = TorusElement.exp([x / 2 for x in lst.frame.from_l(lst.c_p(other, zeta))])
            assert tau_of(tau, other) + tau_of(tau, zeta) == tau_of(tau, total) + half_c

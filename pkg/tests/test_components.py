from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from planejets.components import (
    ComponentLabel,
    Kind,
    birth_level,
    boundary_codim,
    classify_components,
    component_codim,
    count_closed_form,
    death_level,
    dim_linear_functions,
    fiber_codim_closed_form,
    fiber_dim,
    is_empty_component,
    lct_minimum,
    level_index,
    stratum_of_k,
)
from planejets.semigroup import invariants_from_semigroup

from conftest import semigroups

INV_4_6_15 = invariants_from_semigroup((4, 6, 15))
CUSP = invariants_from_semigroup((2, 3))


def _stratum_oracle(inv, k):
    """Largest l in [2, g+1] with n_2...n_{l-1} dividing k, straight from the definition."""
    best = 2
    for l in range(2, inv.g + 2):
        prod = 1
        for i in range(2, l):
            prod *= inv.n_at(i)
        if k % prod == 0:
            best = l
    prod = 1
    for i in range(2, best):
        prod *= inv.n_at(i)
    return best, k // prod


@pytest.mark.parametrize(
    "gens, k, expected",
    [((4, 6, 15), 1, (2, 1)), ((4, 6, 15), 2, (3, 1)), ((8, 12, 30, 63), 6, (3, 3))],
)
def test_stratum_examples(gens, k, expected):
    assert tuple(stratum_of_k(invariants_from_semigroup(gens), k)) == expected


@given(semigroups(), st.integers(1, 500))
def test_stratum_matches_definition(gens, k):
    inv = invariants_from_semigroup(gens)
    j, kappa = stratum_of_k(inv, k)
    assert (j, kappa) == _stratum_oracle(inv, k)
    if j <= inv.g:
        assert kappa % inv.n_at(j) != 0


def test_emptiness_examples():
    assert not is_empty_component(INV_4_6_15, 1, 14)
    assert is_empty_component(INV_4_6_15, 1, 15)
    assert not is_empty_component(INV_4_6_15, 2, 10000)
    with pytest.raises(ValueError):
        is_empty_component(INV_4_6_15, 1, 11)


@pytest.mark.parametrize("inv, k, m, codim", [(INV_4_6_15, 1, 14, 7), (INV_4_6_15, 2, 30, 14), (CUSP, 1, 7, 7)])
def test_component_codim_examples(inv, k, m, codim):
    assert component_codim(inv, k, m) == codim


def test_component_codim_rejects_empty():
    with pytest.raises(ValueError):
        component_codim(INV_4_6_15, 1, 15)


@pytest.mark.parametrize(
    "gens, m, codim", [((4, 6, 15), 3, 2), ((4, 6, 15), 12, 6), ((4, 6, 13), 26, 12)]
)
def test_boundary_codim_examples(gens, m, codim):
    assert boundary_codim(invariants_from_semigroup(gens), m) == codim


def test_classify_examples():
    s = classify_components(INV_4_6_15, 13)
    assert s.count == 1 and s.components[0].label == ComponentLabel.boundary(0)
    s = classify_components(INV_4_6_15, 14)
    assert [c.label for c in s.components] == [ComponentLabel.type_v(2, 1), ComponentLabel.boundary(1)]
    assert [c.codim for c in s.components] == [7, 7]
    s = classify_components(INV_4_6_15, 30)
    assert [c.label for c in s.components] == [ComponentLabel.type_i(1), ComponentLabel.boundary(2)]
    assert [c.codim for c in s.components] == [14, 14]
    s = classify_components(CUSP, 7)
    assert [str(c.label) for c in s.components] == ["I[κ=1]", "B[q=1]"]
    assert [c.codim for c in s.components] == [7, 7]
    assert s.dim == 9


def test_coincidence_flag():
    # m = 12 = n1*bbar1 lies in the window where B_m is the closure of C_m^1
    s = classify_components(INV_4_6_15, 12)
    assert s.boundary.coincides_with_next
    assert not classify_components(INV_4_6_15, 11).boundary.coincides_with_next


@pytest.mark.parametrize("m, value", [(11, 5), (12, 6), (30, 14)])
def test_closed_form_examples(m, value):
    assert fiber_codim_closed_form(INV_4_6_15, m).value == value


@pytest.mark.parametrize(
    "gens, m_max, value, argmin",
    [((2, 3), 12, Fraction(5, 6), 5), ((4, 6, 15), 24, Fraction(5, 12), 11), ((8, 12, 30, 63), 47, Fraction(5, 24), 23)],
)
def test_lct_examples(gens, m_max, value, argmin):
    assert lct_minimum(invariants_from_semigroup(gens), m_max) == (value, argmin)


def test_lct_needs_enough_levels():
    with pytest.raises(ValueError, match="at least"):
        lct_minimum(INV_4_6_15, 5)


def test_dimension_line_examples():
    lines = dim_linear_functions(CUSP)
    line5 = lines[5]
    assert line5(5) == 7 and line5.slope == Fraction(7, 6)
    assert [fiber_dim(CUSP, m) for m in (5, 11, 17)] == [7, 14, 21]
    assert lines[0](18) == fiber_dim(CUSP, 18)
    assert dim_linear_functions(INV_4_6_15)[11].slope == Fraction(19, 12)


def test_level_index_and_birth():
    assert level_index(INV_4_6_15, 13) == 0
    assert level_index(INV_4_6_15, 14) == 1
    assert birth_level(INV_4_6_15, 1) == 14
    assert death_level(INV_4_6_15, 1) == 15
    assert death_level(INV_4_6_15, 2) is None


def test_label_invariants():
    with pytest.raises(AssertionError):
        ComponentLabel(Kind.TYPE_V, kappa=1)
    assert ComponentLabel.type_v(2, 3).branch_key() == ("V", 2, 3)


@given(semigroups(max_entry=120))
def test_classification_properties(gens):
    inv = invariants_from_semigroup(gens)
    for m in range(1, 3 * inv.period + 1):
        s = classify_components(inv, m)
        assert s.count >= 1
        assert s.fiber_codim == boundary_codim(inv, m) == min(c.codim for c in s.components)
        assert all(c.codim >= 2 and c.dim == 2 * (m + 1) - c.codim for c in s.components)
        if s.q >= inv.q0 + 1:
            assert s.count == count_closed_form(inv, m)
        if m < (inv.q0 + 1) * inv.period + inv.e1:
            assert s.count == 1
        assert fiber_codim_closed_form(inv, m).value == s.fiber_codim


@given(semigroups(max_entry=120))
def test_monotone_in_k(gens):
    inv = invariants_from_semigroup(gens)
    m_top = 4 * inv.period
    for m in range(inv.period, m_top + 1):
        live = [k for k in range(1, m // inv.period + 1) if not is_empty_component(inv, k, m)]
        codims = [component_codim(inv, k, m) for k in live]
        assert all(a >= b for a, b in zip(codims, codims[1:]))


@given(semigroups(max_entry=120))
def test_codim_steps_by_zero_or_one(gens):
    inv = invariants_from_semigroup(gens)
    for k in range(1, 4):
        last = death_level(inv, k) or 5 * inv.period
        prev = None
        for m in range(k * inv.period, last):
            c = component_codim(inv, k, m)
            if prev is not None:
                assert c - prev in (0, 1)
            prev = c


@given(semigroups(max_entry=120))
def test_dimension_lines_hit_fourth_level(gens):
    inv = invariants_from_semigroup(gens)
    start = max(1, inv.q0 * inv.period + inv.e1)
    for line in dim_linear_functions(inv):
        m0 = start + (line.residue - start) % inv.period
        assert line(m0 + 3 * inv.period) == fiber_dim(inv, m0 + 3 * inv.period)


def test_g1_reduces_to_q_plus_one():
    for m in range(1, 40):
        s = classify_components(CUSP, m)
        assert s.count == s.q + 1

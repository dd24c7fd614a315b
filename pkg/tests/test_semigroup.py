import random
from fractions import Fraction
from math import gcd, prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from planejets.algebra.jets import Parametrization, ord_t
from planejets.algebra.polynomial import PlanePolynomial
from planejets.semigroup import (
    CharacteristicSequence,
    InvalidSemigroupError,
    contact_from_intersection,
    derive_invariants,
    format_semigroup,
    in_semigroup,
    intersection_via_contact,
    invariants_from_semigroup,
    parse_semigroup,
    puiseux_from_semigroup,
)

from conftest import semigroups


@pytest.mark.parametrize(
    "text, beta_bar, e, n",
    [
        ("2;3", (2, 3), (2, 1), (2,)),
        ("4;6,9", (4, 6, 15), (4, 2, 1), (2, 2)),
        ("8;12,18,21", (8, 12, 30, 63), (8, 4, 2, 1), (2, 2, 2)),
    ],
)
def test_derive_examples(text, beta_bar, e, n):
    inv = derive_invariants(CharacteristicSequence.parse(text))
    assert inv.beta_bar == beta_bar
    assert inv.e == e
    assert inv.n == n
    assert inv.q0 == 0


def test_cusp_m_sequence():
    inv = derive_invariants(CharacteristicSequence(2, (3,)))
    assert inv.m_seq == (3,)
    assert inv.period == 6


def test_q0_of_4_6_13():
    # 13 - 12 = 1 < e1 = 2, so two steps are needed
    assert invariants_from_semigroup((4, 6, 13)).q0 == 1


@pytest.mark.parametrize(
    "gens, cs",
    [((4, 6, 15), CharacteristicSequence(4, (6, 9))), ((2, 3), CharacteristicSequence(2, (3,)))],
)
def test_puiseux_from_semigroup(gens, cs):
    assert puiseux_from_semigroup(gens) == cs


def test_rejects_4_6_11():
    with pytest.raises(InvalidSemigroupError, match=r"n1\*bbar1 < bbar2 \(12 >= 11\)"):
        puiseux_from_semigroup((4, 6, 11))


@pytest.mark.parametrize(
    "text, needle",
    [
        ("1;2", "beta0"),
        ("4;6,8", "gcd chain"),
        ("4;", "at least one"),
        ("4;6,5", "increase"),
        ("4;6", "end at 1"),
    ],
)
def test_charseq_validation(text, needle):
    with pytest.raises(InvalidSemigroupError, match=needle):
        CharacteristicSequence.parse(text)


def test_text_forms():
    assert parse_semigroup(" 4, 6 ,15") == (4, 6, 15)
    assert format_semigroup((4, 6, 15)) == "4,6,15"
    assert str(CharacteristicSequence.parse("4 ; 6, 9")) == "4;6,9"
    with pytest.raises(InvalidSemigroupError):
        parse_semigroup("4,six")


@pytest.mark.parametrize(
    "cs, p, o, v",
    [("4;6,9", 1, Fraction(3, 2), 6), ("4;6,9", 2, Fraction(9, 4), 15), ("4;6,9", 1, 1, 4), ("2;3", 1, Fraction(3, 2), 3)],
)
def test_intersection_and_contact(cs, p, o, v):
    cs = CharacteristicSequence.parse(cs)
    assert intersection_via_contact(cs, p, o) == v
    assert contact_from_intersection(cs, p, v) == o


def test_intersection_matches_order_oracle():
    par = Parametrization.parse("t^4, t^6+t^9")
    cs = CharacteristicSequence.parse("4;6,9")
    x, y = PlanePolynomial.x(), PlanePolynomial.y()
    assert ord_t(y, par) == intersection_via_contact(cs, 1, Fraction(3, 2))
    assert ord_t(y**2 - x**3, par) == intersection_via_contact(cs, 2, Fraction(9, 4))
    assert ord_t(y - x, par) == intersection_via_contact(cs, 1, 1)


def test_contact_rejects_unattainable():
    with pytest.raises(ValueError):
        contact_from_intersection(CharacteristicSequence.parse("4;6,9"), 1, 0)


def test_in_semigroup():
    gens = (4, 6, 15)
    brute = {a * 4 + b * 6 + c * 15 for a in range(10) for b in range(10) for c in range(4)}
    for v in range(40):
        assert in_semigroup(v, gens) == (v in brute)


@given(semigroups())
def test_round_trip_from_semigroup(gens):
    cs = puiseux_from_semigroup(gens)
    inv = derive_invariants(cs)
    assert inv.beta_bar == gens
    assert puiseux_from_semigroup(inv.beta_bar) == cs


@given(semigroups())
def test_invariant_laws(gens):
    inv = invariants_from_semigroup(gens)
    g = inv.g
    for i in range(g + 1):
        assert inv.e[i] == prod(inv.n[i:])
        assert inv.e[i] == gcd(*inv.beta_bar[: i + 1])
    for i in range(1, g):
        assert inv.n[i - 1] * inv.beta_bar[i] < inv.beta_bar[i + 1]
        cs = inv.charseq
        assert inv.beta_bar[i + 1] == inv.n[i - 1] * inv.beta_bar[i] + cs.beta(i + 1) - cs.beta(i)
    if g >= 2:
        assert 0 <= inv.q0 < inv.n[1]
        gap = inv.beta_bar[2] - inv.n1 * inv.beta1
        assert (inv.q0 + 1) * gap >= inv.e1 > inv.q0 * gap
    else:
        assert inv.q0 == 0
    assert inv.period == inv.beta0 * inv.beta1 // inv.e1


@given(semigroups(max_entry=120), st.integers(1, 4), st.fractions(min_value=Fraction(1, 8), max_value=12))
def test_intersection_monotone_and_inverse(gens, p, o):
    cs = puiseux_from_semigroup(gens)
    mult = p * cs.beta0 * 7 * o.denominator  # clears every denominator below
    v1 = intersection_via_contact(cs, mult, o)
    v2 = intersection_via_contact(cs, mult, o + Fraction(1, 7))
    assert v1 <= v2
    assert contact_from_intersection(cs, mult, v1) == o


@given(semigroups(max_g=2, max_beta0=8, max_entry=40), st.integers(0, 2**16))
def test_orders_lie_in_semigroup(gens, seed):
    """ord_t of curves not containing the branch lands in the semigroup."""
    cs = puiseux_from_semigroup(gens)
    ys = [0] * (cs.betas[-1] + 1)
    for b in cs.betas:
        ys[b] = 1
    par = Parametrization((0,) * cs.beta0 + (1,), tuple(ys))
    rng = random.Random(seed)
    terms = {(rng.randint(0, 5), rng.randint(0, cs.beta0 - 1)): rng.randint(-3, 3) for _ in range(4)}
    h = PlanePolynomial(terms)
    if not h.coeffs:
        return
    v = ord_t(h, par)
    assert isinstance(v, int)
    assert in_semigroup(v, gens)

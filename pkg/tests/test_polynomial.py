from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from planejets.algebra.parser import ExpressionSyntaxError, parse_curve, parse_series
from planejets.algebra.polynomial import JetVariable, PlanePolynomial, SparsePolynomial


def x0(j):
    return SparsePolynomial.variable(0, j)


def x1(j):
    return SparsePolynomial.variable(1, j)


def test_variable_index_round_trip():
    for axis in (0, 1):
        for order in range(5):
            v = JetVariable(axis, order)
            assert JetVariable.from_index(v.index) == v
    assert str(JetVariable(1, 3)) == "x1^(3)"


def test_arithmetic_and_canonical_text():
    p = x1(0) * x1(0) - x0(0) ** 3
    assert str(p) == "(x1^(0))^2 - (x0^(0))^3"
    assert p - p == SparsePolynomial()
    assert (p * 2).terms == p.scale(2).terms
    assert (p + 1) - 1 == p
    assert p.degree_in(JetVariable(0, 0)) == 3
    assert p.total_degree() == 3
    assert p.variables() == {JetVariable(0, 0), JetVariable(1, 0)}


def test_no_zero_coefficients_stored():
    p = SparsePolynomial({(0,): 0, (2,): Fraction(1, 2)})
    assert list(p.terms) == [(2,)]
    assert not (x0(1) - x0(1)).terms


def test_substitute_zero_and_evaluate():
    p = x0(1) * x1(2) + x1(0) ** 2 + 3
    assert p.substitute_zero([JetVariable(1, 0)]) == x0(1) * x1(2) + 3
    values = {JetVariable(0, 1).index: 2, JetVariable(1, 2).index: 4, JetVariable(1, 0).index: 1}
    assert p.evaluate_mod(values, 5) == (8 + 1 + 3) % 5


def test_evaluate_with_fraction_coefficient():
    p = x0(0).scale(Fraction(1, 2))
    assert p.evaluate_mod({0: 1}, 7) == 4  # 1/2 = 4 mod 7


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(-4, 4)), max_size=4),
       st.lists(st.tuples(st.integers(0, 5), st.integers(-4, 4)), max_size=4))
def test_ring_laws(a_terms, b_terms):
    a = SparsePolynomial({(i,): c for i, c in a_terms})
    b = SparsePolynomial({(i, i + 1): c for i, c in b_terms})
    assert a * b == b * a
    assert (a + b) * (a - b) == a * a - b * b
    assert a**3 == a * a * a


def test_parse_examples():
    f = parse_curve("(y^2-x^3)^2-4*x^6*y-x^9")
    assert f.coeffs == {(0, 4): 1, (3, 2): -2, (6, 0): 1, (6, 1): -4, (9, 0): -1}
    assert parse_curve("y**2 - x ** 3") == parse_curve("y^2-x^3")
    assert parse_curve("-(x)") == PlanePolynomial({(1, 0): -1})
    assert parse_series("t^4+2*t") == [0, 2, 0, 0, 1]


def test_plane_polynomial_text():
    assert str(parse_curve("y^2-x^3")) == "y^2-x^3"
    assert str(parse_curve("3*x*y-1")) == "-1+3*x*y"


@pytest.mark.parametrize(
    "text, pos",
    [("x^2 + * y", 6), ("(x+y", 4), ("x^y", 2), ("x $ y", 2), ("", 0), ("y^2-z", 4), ("x y", 2)],
)
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_curve(text)
    assert info.value.pos == pos
    assert "^" in str(info.value)

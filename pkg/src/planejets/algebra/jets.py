"""Jet equations of a plane curve and the symbolic oracles built on them.

Substituting ``x_i = sum_j x_i^(j) t^j`` into ``f`` and reading the
coefficient of ``t^j`` gives the jet equations ``F^(j)``.  They are produced
here by truncated power-series composition: powers of the two generic series
are built once, truncated after ``t^m``, and combined term by term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd
from typing import Iterable

from ..semigroup import CharacteristicSequence, InvalidSemigroupError
from .parser import ExpressionSyntaxError, parse_series
from .polynomial import JetVariable, PlanePolynomial, SparsePolynomial


class NormalFormError(ValueError):
    """The curve is not a binomial power plus terms above its Newton segment."""


# -- truncated series with polynomial coefficients ---------------------------

Series = list  # list of SparsePolynomial, index = power of t


def _series_mul(a: Series, b: Series, length: int) -> Series:
    out = [SparsePolynomial() for _ in range(length)]
    for i, ai in enumerate(a[:length]):
        if not ai:
            continue
        for j in range(min(len(b), length - i)):
            bj = b[j]
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return out


def _series_powers(base: Series, top: int, length: int) -> list[Series]:
    one = [SparsePolynomial.constant(1)] + [SparsePolynomial() for _ in range(length - 1)]
    powers = [one]
    for _ in range(top):
        powers.append(_series_mul(powers[-1], base, length))
    return powers


def generic_series(axis: int, m: int, zero: Iterable[JetVariable] = ()) -> Series:
    dead = set(zero)
    return [
        SparsePolynomial() if JetVariable(axis, j) in dead else SparsePolynomial.variable(axis, j)
        for j in range(m + 1)
    ]


def jet_coefficients(
    f: PlanePolynomial, m: int, zero: Iterable[JetVariable] = ()
) -> list[SparsePolynomial]:
    """``[F^(0), ..., F^(m)]``, optionally with the variables in ``zero`` set to 0.

    Substituting before composing is much cheaper than composing and then
    substituting, and gives the same result.
    """
    if m < 0:
        raise ValueError("level must be non-negative")
    length = m + 1
    zero = list(zero)
    xs = _series_powers(generic_series(0, m, zero), f.degree_x(), length)
    ys = _series_powers(generic_series(1, m, zero), f.degree_y(), length)
    total = [SparsePolynomial() for _ in range(length)]
    for (a, b), c in f.coeffs.items():
        term = _series_mul(xs[a], ys[b], length)
        for j in range(length):
            if term[j]:
                total[j] = total[j] + term[j].scale(c)
    return total


def _derive(poly: SparsePolynomial, m: int) -> SparsePolynomial:
    """Apply ``D(x_i^(j)) = (j+1) x_i^(j+1)`` with ``D(x_i^(m)) = 0``."""
    out: dict[tuple[int, ...], Fraction] = {}
    for mono, c in poly.terms.items():
        seen = set()
        for pos, idx in enumerate(mono):
            if idx in seen:
                continue
            seen.add(idx)
            var = JetVariable.from_index(idx)
            if var.order >= m:
                continue
            mult = mono.count(idx)
            rest = mono[:pos] + mono[pos + 1 :]
            new = tuple(sorted(rest + (idx + 2,)))
            s = out.get(new, 0) + c * mult * (var.order + 1)
            if s:
                out[new] = s
            else:
                out.pop(new, None)
    return SparsePolynomial(out)


def jet_derivation(f: PlanePolynomial, m: int) -> list[SparsePolynomial]:
    """``[f^(0), ..., f^(m)]`` obtained by iterating the derivation ``D``."""
    if m < 0:
        raise ValueError("level must be non-negative")
    x0, x1 = SparsePolynomial.variable(0, 0), SparsePolynomial.variable(1, 0)
    current = SparsePolynomial()
    for (a, b), c in f.coeffs.items():
        current = current + (x0**a * x1**b).scale(c)
    out = [current]
    for _ in range(m):
        current = _derive(current, m)
        out.append(current)
    return out


def derivation_identity_holds(f: PlanePolynomial, m: int) -> int | None:
    """First ``j`` where ``j! F^(j) != f^(j)``, or ``None`` when all agree."""
    coeffs = jet_coefficients(f, m)
    derived = jet_derivation(f, m)
    for j in range(m + 1):
        if coeffs[j].scale(factorial(j)) != derived[j]:
            return j
    return None


# -- Newton polygon normal form ---------------------------------------------


@dataclass(frozen=True)
class NewtonForm:
    beta0: int
    beta1: int
    n1: int
    m1: int
    e1: int
    c: Fraction
    residual: PlanePolynomial

    def boundary(self) -> PlanePolynomial:
        x, y = PlanePolynomial.x(), PlanePolynomial.y()
        return (y**self.n1 - x**self.m1 * self.c) ** self.e1


def _monomial(a: int, b: int) -> str:
    return str(PlanePolynomial({(a, b): 1}))


def newton_form(f: PlanePolynomial) -> NewtonForm:
    if not f.coeffs:
        raise NormalFormError("not in normal form: f is zero")
    if (0, 0) in f.coeffs:
        raise NormalFormError("not in normal form: f(0,0) != 0, the origin is not on the curve")
    on_y = [b for a, b in f.coeffs if a == 0]
    if not on_y:
        raise NormalFormError("not in normal form: f(0,y) = 0, f is not y-regular")
    on_x = [a for a, b in f.coeffs if b == 0]
    if not on_x:
        raise NormalFormError("not in normal form: f(x,0) = 0, so y divides f and the curve is not a branch")
    beta0, beta1 = min(on_y), min(on_x)
    below = sorted(
        (a, b) for a, b in f.coeffs if a * beta0 + b * beta1 < beta0 * beta1
    )
    if below:
        a, b = below[0]
        raise NormalFormError(
            f"not in normal form: monomial {_monomial(a, b)} lies below the Newton segment "
            f"from y^{beta0} to x^{beta1}"
        )
    e1 = gcd(beta0, beta1)
    n1, m1 = beta0 // e1, beta1 // e1
    if n1 == 1:
        raise NormalFormError(
            f"not in normal form: beta0 = {beta0} divides beta1 = {beta1} (n1 = 1), "
            "so the coordinates are not adapted or the curve is not a branch"
        )
    if m1 == 1:
        raise NormalFormError(f"not in normal form: m1 = 1, the curve is smooth in x")
    lead = f.coeffs[(0, beta0)]
    if lead != 1:
        raise NormalFormError(f"not in normal form: coefficient of y^{beta0} is {lead}, expected 1")
    pivot = f.coeffs.get((m1, beta0 - n1), Fraction(0))
    c = -pivot / e1
    if c == 0:
        raise NormalFormError(
            f"not in normal form: monomial {_monomial(m1, beta0 - n1)} missing from the boundary binomial"
        )
    x, y = PlanePolynomial.x(), PlanePolynomial.y()
    expected = (y**n1 - x**m1 * c) ** e1
    on_segment = {k: v for k, v in f.coeffs.items() if k[0] * beta0 + k[1] * beta1 == beta0 * beta1}
    if on_segment != expected.coeffs:
        keys = sorted(set(on_segment) | set(expected.coeffs), key=lambda k: (k[1], k[0]), reverse=True)
        bad = next(k for k in keys if on_segment.get(k, 0) != expected.coeffs.get(k, 0))
        raise NormalFormError(
            f"not in normal form: boundary is not a binomial power; monomial {_monomial(*bad)} "
            f"has coefficient {on_segment.get(bad, 0)}, expected {expected.coeffs.get(bad, 0)}"
        )
    residual = PlanePolynomial({k: v for k, v in f.coeffs.items() if k not in on_segment})
    return NewtonForm(beta0, beta1, n1, m1, e1, c, residual)


# -- parametrizations and the order oracle ----------------------------------


@dataclass(frozen=True)
class AtLeast:
    """Lower bound reported when the composition vanishes up to truncation."""

    bound: int

    def __str__(self):
        return f">={self.bound}"


@dataclass(frozen=True)
class Parametrization:
    """``(x(t), y(t))`` as coefficient lists; ``trunc=None`` means exact polynomials.

    With a truncation order ``N`` the series are known modulo ``t^N``.
    """

    x_series: tuple[Fraction, ...]
    y_series: tuple[Fraction, ...]
    trunc: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "x_series", tuple(Fraction(c) for c in self.x_series))
        object.__setattr__(self, "y_series", tuple(Fraction(c) for c in self.y_series))
        if self.trunc is not None:
            if self.trunc < 1:
                raise ValueError("truncation order must be positive")
            object.__setattr__(self, "x_series", self.x_series[: self.trunc])
            object.__setattr__(self, "y_series", self.y_series[: self.trunc])

    @classmethod
    def parse(cls, text: str) -> "Parametrization":
        """Parse ``"t^4, t^6+t^9"`` with an optional ``"@trunc=N"`` suffix."""
        body, sep, opt = text.partition("@")
        trunc = None
        if sep:
            key, eq, value = opt.replace(" ", "").partition("=")
            if key != "trunc" or not eq or not value.isdigit():
                raise ExpressionSyntaxError("expected '@trunc=N'", text, len(body))
            trunc = int(value)
        parts = body.split(",")
        if len(parts) != 2:
            raise ExpressionSyntaxError("expected two series separated by ','", text, 0)
        offset = len(parts[0]) + 1
        xs = parse_series(parts[0])
        try:
            ys = parse_series(parts[1])
        except ExpressionSyntaxError as exc:
            raise ExpressionSyntaxError("bad y series", text, offset + exc.pos) from None
        return cls(tuple(xs), tuple(ys), trunc)

    def __str__(self):
        def fmt(series):
            poly = PlanePolynomial({(e, 0): c for e, c in enumerate(series)})
            return str(poly).replace("x", "t")

        text = f"{fmt(self.x_series)}, {fmt(self.y_series)}"
        return text + (f" @trunc={self.trunc}" if self.trunc is not None else "")


def _t_order(series) -> int | None:
    return next((i for i, c in enumerate(series) if c), None)


def characteristic_from_parametrization(par: Parametrization) -> CharacteristicSequence:
    """Characteristic exponents read off the support of ``y(t)`` with ``x = t^beta0``."""
    beta0 = _t_order(par.x_series)
    if beta0 is None or any(c for i, c in enumerate(par.x_series) if i != beta0) or par.x_series[beta0] != 1:
        raise InvalidSemigroupError("parametrization must have x(t) = t^beta0")
    y_order = _t_order(par.y_series)
    if y_order is None or y_order < beta0:
        raise InvalidSemigroupError("y(t) must have order at least beta0 = ord x(t)")
    e, betas = beta0, []
    for i, c in enumerate(par.y_series):
        if c and i % e:
            betas.append(i)
            e = gcd(e, i)
            if e == 1:
                break
    if e != 1:
        where = f"below t^{par.trunc}" if par.trunc is not None else "in y(t)"
        raise InvalidSemigroupError(
            f"characteristic exponents {betas} {where} leave gcd {e} > 1; the parametrization is not primitive"
        )
    return CharacteristicSequence(beta0, tuple(betas))


def _uni_mul(a: list, b: list, length: int) -> list:
    out = [Fraction(0)] * length
    for i, ai in enumerate(a[:length]):
        if ai:
            for j in range(min(len(b), length - i)):
                if b[j]:
                    out[i + j] += ai * b[j]
    return out


def ord_t(h: PlanePolynomial, par: Parametrization):
    """``ord_t h(x(t), y(t))``: an int, ``math.inf`` if identically zero, or ``AtLeast(N)``."""
    if par.trunc is not None:
        length = par.trunc
    else:
        length = h.degree_x() * len(par.x_series) + h.degree_y() * len(par.y_series) + 1
    xs = [[Fraction(1)]]
    for _ in range(h.degree_x()):
        xs.append(_uni_mul(xs[-1], list(par.x_series), length))
    ys = [[Fraction(1)]]
    for _ in range(h.degree_y()):
        ys.append(_uni_mul(ys[-1], list(par.y_series), length))
    total = [Fraction(0)] * length
    for (a, b), c in h.coeffs.items():
        for i, v in enumerate(_uni_mul(xs[a], ys[b], length)):
            total[i] += c * v
    order = _t_order(total)
    if order is not None:
        return order
    return math.inf if par.trunc is None else AtLeast(par.trunc)


# -- reduced fiber check ----------------------------------------------------


@dataclass
class CheckItem:
    j: int
    expected: str
    actual: str
    ok: bool


@dataclass
class FiberCheckReport:
    m: int
    mode: str
    zeroed: list[JetVariable]
    items: list[CheckItem] = field(default_factory=list)
    survivor: SparsePolynomial | None = None

    @property
    def passed(self) -> bool:
        return all(item.ok for item in self.items)

    @property
    def first_failure(self) -> CheckItem | None:
        return next((item for item in self.items if not item.ok), None)

    def summary(self) -> str:
        if self.passed:
            if self.survivor is not None:
                return f"m={self.m}: F^(<{self.m}) vanish, survivor {self.survivor}"
            return f"m={self.m}: F^(0..{self.m}) vanish ({self.mode})"
        bad = self.first_failure
        return f"m={self.m}: F^({bad.j}) = {bad.actual}, expected {bad.expected}"


def expected_survivor(nf: NewtonForm, k: int) -> SparsePolynomial:
    u = SparsePolynomial.variable(1, k * nf.m1)
    v = SparsePolynomial.variable(0, k * nf.n1)
    return (u**nf.n1 - (v**nf.m1).scale(nf.c)) ** nf.e1


def reduced_fiber_check(f: PlanePolynomial, m: int, nf: NewtonForm | None = None) -> FiberCheckReport:
    """Check the shape of the jet equations on the expected reduced fiber.

    At ``m = k * n1 * beta1`` the variables ``x0^(<k n1)`` and ``x1^(<k m1)``
    are set to zero; every ``F^(j)`` with ``j < m`` must vanish and ``F^(m)``
    must equal the binomial power in ``x1^(k m1)`` and ``x0^(k n1)``.
    At any other ``m`` the variables ``x0^(<= m//beta1)`` and
    ``x1^(<= m//beta0)`` are set to zero and all of ``F^(0..m)`` must vanish.
    Below ``n1 * beta1`` this zero set is the whole reduced fiber; above it is
    only contained in the fiber.
    """
    if m < 1:
        raise ValueError("level must be positive")
    nf = nf or newton_form(f)
    period = nf.n1 * nf.beta1
    if m % period == 0:
        k = m // period
        zeroed = [JetVariable(0, j) for j in range(k * nf.n1)] + [JetVariable(1, j) for j in range(k * nf.m1)]
        report = FiberCheckReport(m, "binomial survivor", zeroed)
        eqs = jet_coefficients(f, m, zeroed)
        for j, eq in enumerate(eqs[:-1]):
            report.items.append(CheckItem(j, "0", str(eq), eq.is_zero()))
        target = expected_survivor(nf, k)
        report.items.append(CheckItem(m, str(target), str(eqs[m]), eqs[m] == target))
        report.survivor = eqs[m]
        return report
    zeroed = [JetVariable(0, j) for j in range(m // nf.beta1 + 1)] + [
        JetVariable(1, j) for j in range(m // nf.beta0 + 1)
    ]
    mode = "reduced fiber" if m < period else "contained in fiber"
    report = FiberCheckReport(m, mode, zeroed)
    for j, eq in enumerate(jet_coefficients(f, m, zeroed)):
        report.items.append(CheckItem(j, "0", str(eq), eq.is_zero()))
    return report


def normal_form_curve(cs: CharacteristicSequence) -> PlanePolynomial | None:
    """``y^n - x^m`` for a single-exponent sequence; ``None`` when ``g >= 2``."""
    if cs.g != 1:
        return None
    return PlanePolynomial({(0, cs.beta0): 1, (cs.betas[0], 0): -1})

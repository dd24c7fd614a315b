"""Exact sparse polynomials.

``PlanePolynomial`` holds a bivariate polynomial ``sum c_ab x^a y^b``.
``SparsePolynomial`` holds polynomials in the jet variables ``x_i^(j)``;
a monomial is the sorted tuple of the variable indices it contains, repeated
according to multiplicity.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple


class JetVariable(NamedTuple):
    axis: int
    order: int

    @property
    def index(self) -> int:
        return 2 * self.order + self.axis

    @classmethod
    def from_index(cls, index: int) -> "JetVariable":
        return cls(index % 2, index // 2)

    def __str__(self):
        return f"x{self.axis}^({self.order})"


def _coerce(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class SparsePolynomial:
    """Immutable polynomial over ``Q`` in jet variables."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, ...], Fraction] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    clean[tuple(mono)] = _coerce(c)
        self.terms: dict[tuple[int, ...], Fraction] = clean

    @classmethod
    def _raw(cls, terms: dict) -> "SparsePolynomial":
        poly = cls.__new__(cls)
        poly.terms = terms
        return poly

    @classmethod
    def constant(cls, c) -> "SparsePolynomial":
        return cls({(): c})

    @classmethod
    def variable(cls, axis: int, order: int) -> "SparsePolynomial":
        return cls._raw({(JetVariable(axis, order).index,): Fraction(1)})

    @classmethod
    def monomial(cls, variables: Iterable[JetVariable], c=1) -> "SparsePolynomial":
        return cls({tuple(sorted(v.index for v in variables)): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SparsePolynomial.constant(other)
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SparsePolynomial.constant(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return SparsePolynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePolynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "SparsePolynomial":
        c = _coerce(c)
        if not c:
            return SparsePolynomial()
        return SparsePolynomial._raw({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(sorted(m1 + m2)) if m1 and m2 else m1 or m2
                s = out.get(mono, 0) + c1 * c2
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return SparsePolynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        result = SparsePolynomial.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def variables(self) -> set[JetVariable]:
        return {JetVariable.from_index(i) for mono in self.terms for i in mono}

    def degree_in(self, var: JetVariable) -> int:
        idx = var.index
        return max((mono.count(idx) for mono in self.terms), default=0)

    def total_degree(self) -> int:
        return max((len(mono) for mono in self.terms), default=0)

    def substitute_zero(self, variables: Iterable[JetVariable]) -> "SparsePolynomial":
        dead = {v.index for v in variables}
        return SparsePolynomial._raw(
            {m: c for m, c in self.terms.items() if not dead.intersection(m)}
        )

    def evaluate_mod(self, values: Mapping[int, int], p: int) -> int:
        """Evaluate mod ``p`` with ``values`` keyed by variable index."""
        total = 0
        for mono, c in self.terms.items():
            term = c.numerator * pow(c.denominator, -1, p)
            for i in mono:
                term = term * values.get(i, 0) % p
                if not term:
                    break
            total += term
        return total % p

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms by total degree, then by variable indices."""
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            factors = []
            for idx, e in sorted(Counter(mono).items()):
                name = str(JetVariable.from_index(idx))
                factors.append(name if e == 1 else f"({name})^{e}")
            body = "*".join(factors)
            if not body:
                text = str(c)
            elif c == 1:
                text = body
            elif c == -1:
                text = "-" + body
            else:
                text = f"{c}*{body}"
            parts.append(text)
        out = parts[0]
        for part in parts[1:]:
            out += " - " + part[1:] if part.startswith("-") else " + " + part
        return out

    def __repr__(self):
        return f"SparsePolynomial({self})"


class PlanePolynomial:
    """Bivariate polynomial ``sum c_ab x^a y^b`` with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[tuple[int, int], Fraction] | None = None):
        self.coeffs: dict[tuple[int, int], Fraction] = {
            (int(a), int(b)): _coerce(c) for (a, b), c in (coeffs or {}).items() if c
        }

    @classmethod
    def x(cls) -> "PlanePolynomial":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "PlanePolynomial":
        return cls({(0, 1): 1})

    @classmethod
    def constant(cls, c) -> "PlanePolynomial":
        return cls({(0, 0): c})

    def support(self) -> list[tuple[int, int]]:
        return sorted(self.coeffs)

    def degree_x(self) -> int:
        return max((a for a, _ in self.coeffs), default=0)

    def degree_y(self) -> int:
        return max((b for _, b in self.coeffs), default=0)

    def __eq__(self, other):
        if not isinstance(other, PlanePolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PlanePolynomial.constant(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return PlanePolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return PlanePolynomial({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PlanePolynomial({k: c * other for k, c in self.coeffs.items()})
        out: dict[tuple[int, int], Fraction] = {}
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + c1 * c2
        return PlanePolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        result = PlanePolynomial.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for (a, b), c in sorted(self.coeffs.items(), key=lambda t: (t[0][0] + t[0][1], t[0])):
            factors = []
            if a:
                factors.append("x" if a == 1 else f"x^{a}")
            if b:
                factors.append("y" if b == 1 else f"y^{b}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        out = parts[0]
        for part in parts[1:]:
            out += "-" + part[1:] if part.startswith("-") else "+" + part
        return out

    def __repr__(self):
        return f"PlanePolynomial({self})"

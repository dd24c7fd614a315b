"""Parser for integer-coefficient polynomial expressions.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := ("+" | "-") unary | power
    power  := atom (("^" | "**") INT)?
    atom   := INT | VARIABLE | "(" expr ")"

Curves use the variables ``x, y``; parametrizations use ``t``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .polynomial import PlanePolynomial

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*^()]))")

Poly = dict  # exponent tuple -> Fraction


class ExpressionSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.pos = pos
        pointer = " " * pos + "^"
        super().__init__(f"{message} at position {pos}\n  {text}\n  {pointer}")


class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...]):
        self.text = text
        self.variables = variables
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            match = _TOKEN.match(text, pos)
            if not match:
                start = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise ExpressionSyntaxError(f"unexpected character {text[start]!r}", text, start)
            num, name, op = match.groups()
            start = match.start(match.lastindex)
            if num is not None:
                self.tokens.append(("int", num, start))
            elif name is not None:
                if name not in variables:
                    raise ExpressionSyntaxError(
                        f"unknown variable {name!r} (expected one of {', '.join(variables)})", text, start
                    )
                self.tokens.append(("var", name, start))
            else:
                self.tokens.append(("op", op, start))
            pos = match.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, message: str):
        raise ExpressionSyntaxError(message, self.text, self.peek()[2])

    def parse(self) -> Poly:
        if not self.tokens:
            self.fail("empty expression")
        result = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return result

    def expr(self) -> Poly:
        result = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            sign = self.take()[1]
            rhs = self.term()
            result = _add(result, rhs if sign == "+" else _scale(rhs, -1))
        return result

    def term(self) -> Poly:
        result = self.unary()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            result = _mul(result, self.unary())
        return result

    def unary(self) -> Poly:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return _scale(self.unary(), -1)
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[:2] in (("op", "^"), ("op", "**")):
            self.take()
            kind, value, _ = self.peek()
            if kind != "int":
                self.fail("exponent must be a non-negative integer")
            self.take()
            result = {(0,) * len(self.variables): Fraction(1)}
            for _ in range(int(value)):
                result = _mul(result, base)
            return result
        return base

    def atom(self) -> Poly:
        kind, value, _ = self.peek()
        if kind == "int":
            self.take()
            return {(0,) * len(self.variables): Fraction(int(value))}
        if kind == "var":
            self.take()
            exps = [0] * len(self.variables)
            exps[self.variables.index(value)] = 1
            return {tuple(exps): Fraction(1)}
        if (kind, value) == ("op", "("):
            self.take()
            inner = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return inner
        if kind == "end":
            self.fail("unexpected end of expression")
        self.fail(f"unexpected {value!r}")


def _add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _scale(a: Poly, c) -> Poly:
    return {k: v * c for k, v in a.items()}


def _mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for k1, c1 in a.items():
        for k2, c2 in b.items():
            key = tuple(e1 + e2 for e1, e2 in zip(k1, k2))
            s = out.get(key, 0) + c1 * c2
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def parse_polynomial(text: str, variables: tuple[str, ...]) -> Poly:
    return _Parser(text, variables).parse()


def parse_curve(text: str) -> PlanePolynomial:
    """Parse an expression in ``x`` and ``y`` such as ``(y^2-x^3)^2-4*x^6*y-x^9``."""
    return PlanePolynomial(parse_polynomial(text, ("x", "y")))


def parse_series(text: str) -> list[Fraction]:
    """Parse a polynomial in ``t``; returns the dense coefficient list."""
    poly = parse_polynomial(text, ("t",))
    degree = max((k[0] for k in poly), default=0)
    coeffs = [Fraction(0)] * (degree + 1)
    for (e,), c in poly.items():
        coeffs[e] = c
    return coeffs

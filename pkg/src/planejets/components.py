"""Irreducible components of the jet fibers over the singular point.

For a branch with semigroup invariants ``inv`` and a jet level ``m``, the
fiber ``C_m^0`` decomposes into

* ``TypeI`` components (contact ``kappa * bbar0`` with ``x0``), which persist
  at every higher level,
* ``TypeV`` components for ``2 <= j <= g`` (contact ``kappa*bbar0/e_{j-1}``),
  which disappear at level ``kappa * bbar_j``,
* one ``Boundary`` component ``B_m`` of high contact.

All numbers are computed from closed forms in exact integer arithmetic.  The
component count and fiber codimension come from enumeration; the summary
formulas are only used as cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

from .semigroup import SemigroupInvariants


class Kind(str, Enum):
    TYPE_I = "I"
    TYPE_V = "V"
    BOUNDARY = "B"


@dataclass(frozen=True, order=True)
class ComponentLabel:
    kind: Kind
    kappa: int | None = None
    j: int | None = None
    q: int | None = None

    def __post_init__(self):
        if self.kind is Kind.BOUNDARY:
            assert self.q is not None and self.kappa is None and self.j is None
        else:
            assert self.kappa is not None and self.kappa >= 1 and self.q is None
            assert (self.kind is Kind.TYPE_V) == (self.j is not None)

    @classmethod
    def type_i(cls, kappa: int) -> "ComponentLabel":
        return cls(Kind.TYPE_I, kappa=kappa)

    @classmethod
    def type_v(cls, j: int, kappa: int) -> "ComponentLabel":
        return cls(Kind.TYPE_V, kappa=kappa, j=j)

    @classmethod
    def boundary(cls, q: int) -> "ComponentLabel":
        return cls(Kind.BOUNDARY, q=q)

    def branch_key(self) -> tuple:
        """Identity of the inverse system this label belongs to (ignores ``q``)."""
        return (self.kind.value, self.j or 0, self.kappa or 0)

    def __str__(self):
        if self.kind is Kind.BOUNDARY:
            return f"B[q={self.q}]"
        if self.kind is Kind.TYPE_I:
            return f"I[κ={self.kappa}]"
        return f"V[κ={self.kappa},j={self.j}]"


@dataclass(frozen=True)
class ComponentDescriptor:
    label: ComponentLabel
    m: int
    contact: int
    contact_exact: bool
    codim: int
    coincides_with_next: bool = False

    @property
    def dim(self) -> int:
        return 2 * (self.m + 1) - self.codim


@dataclass(frozen=True)
class FiberSummary:
    m: int
    q: int
    components: tuple[ComponentDescriptor, ...]
    fiber_codim: int

    @property
    def count(self) -> int:
        return len(self.components)

    @property
    def dim(self) -> int:
        return 2 * (self.m + 1) - self.fiber_codim

    @property
    def boundary(self) -> ComponentDescriptor:
        return self.components[-1]


class Stratum(NamedTuple):
    j: int
    kappa: int


def level_index(inv: SemigroupInvariants, m: int) -> int:
    """The ``q`` with ``q*P + e1 <= m < (q+1)*P + e1`` (0 below ``e1``)."""
    return max(0, (m - inv.e1) // inv.period)


def stratum_of_k(inv: SemigroupInvariants, k: int) -> Stratum:
    if k < 1:
        raise ValueError("k must be positive")
    j, divisor = 2, 1
    while j <= inv.g and k % (divisor * inv.n_at(j)) == 0:
        divisor *= inv.n_at(j)
        j += 1
    return Stratum(j, k // divisor)


def birth_level(inv: SemigroupInvariants, k: int) -> int:
    """First level at which ``C_m^k`` is listed among the fiber components."""
    return k * inv.period + inv.e1


def death_level(inv: SemigroupInvariants, k: int) -> int | None:
    """First level at which ``C_m^k`` is empty; ``None`` for type I."""
    j, kappa = stratum_of_k(inv, k)
    if j > inv.g:
        return None
    return kappa * inv.beta_bar[j]


def is_empty_component(inv: SemigroupInvariants, k: int, m: int) -> bool:
    if m < k * inv.period:
        raise ValueError(f"C_m^k undefined below level k*n1*bbar1 = {k * inv.period}")
    death = death_level(inv, k)
    return death is not None and m >= death


def _stratum_index(inv: SemigroupInvariants, j: int, kappa: int, m: int) -> int:
    bb = inv.beta_bar
    for i in range(1, j):
        upper_i = i + 1
        if upper_i > inv.g:
            return i
        if m < kappa * inv.n_product(upper_i, j - 1) * bb[upper_i]:
            if m < kappa * inv.n_product(i, j - 1) * bb[i]:
                break
            return i
    raise ValueError(f"level {m} outside the lifetime of the (j={j}, kappa={kappa}) component")


def component_codim(inv: SemigroupInvariants, k: int, m: int) -> int:
    """Codimension of ``C_m^k`` in the ``2(m+1)``-dimensional jet space."""
    if is_empty_component(inv, k, m):
        raise ValueError(f"C_{m}^{k} is empty")
    j, kappa = stratum_of_k(inv, k)
    i = _stratum_index(inv, j, kappa, m)
    bb, n = inv.beta_bar, inv.n
    scale = Fraction(k, inv.e1)
    inner = bb[0] + bb[1] + sum(bb[l + 1] - n[l - 1] * bb[l] for l in range(1, i))
    offset = scale * inner - scale * n[i - 1] * bb[i] + 1
    if offset.denominator != 1:
        raise ArithmeticError(f"non-integral codimension offset {offset} for k={k}, m={m}")
    return int(offset) + m // inv.e[i]


def boundary_codim(inv: SemigroupInvariants, m: int) -> int:
    if m < 1:
        raise ValueError("level must be positive")
    period = inv.period
    q = level_index(inv, m)
    if m - q * period < period:
        return 2 + m // inv.beta0 + m // inv.beta1
    base = (q + 1) * (inv.n1 + inv.m1)
    if inv.g >= 2 and m >= (q + 1) * inv.beta_bar[2]:
        return base + 2
    return base + 1


def count_closed_form(inv: SemigroupInvariants, m: int) -> int:
    """Component count ``q + 1 - sum_j (floor(m/bbar_j) - floor(m/(n_j bbar_j)))``."""
    q = level_index(inv, m)
    empties = sum(
        m // inv.beta_bar[j] - m // (inv.n_at(j) * inv.beta_bar[j]) for j in range(2, inv.g + 1)
    )
    return q + 1 - empties


def classify_components(inv: SemigroupInvariants, m: int) -> FiberSummary:
    if m < 1:
        raise ValueError("level must be positive")
    q = level_index(inv, m)
    components = []
    for k in range(1, q + 1):
        if is_empty_component(inv, k, m):
            continue
        j, kappa = stratum_of_k(inv, k)
        label = ComponentLabel.type_i(kappa) if j > inv.g else ComponentLabel.type_v(j, kappa)
        components.append(
            ComponentDescriptor(label, m, k * inv.n1, True, component_codim(inv, k, m))
        )
    in_window = m >= (q + 1) * inv.period
    components.append(
        ComponentDescriptor(
            ComponentLabel.boundary(q),
            m,
            q * inv.n1,
            False,
            boundary_codim(inv, m),
            coincides_with_next=in_window and not is_empty_component(inv, q + 1, m),
        )
    )
    fiber_codim = min(c.codim for c in components)
    summary = FiberSummary(m, q, tuple(components), fiber_codim)

    assert fiber_codim == components[-1].codim, (m, [c.codim for c in components])
    if q >= inv.q0 + 1:
        assert summary.count == count_closed_form(inv, m), (m, summary.count)
    if m < (inv.q0 + 1) * inv.period + inv.e1:
        assert summary.count == 1, m
    return summary


class ClosedFormCodim(NamedTuple):
    value: int
    source: str


def fiber_codim_closed_form(inv: SemigroupInvariants, m: int) -> ClosedFormCodim:
    """Fiber codimension from the summary case list, where it applies."""
    if m < 1:
        raise ValueError("level must be positive")
    period, e1 = inv.period, inv.e1
    generic = m // inv.beta0 + m // inv.beta1
    q = level_index(inv, m)
    if inv.g == 1:
        # i = m - q*P lies in (0, P]
        return ClosedFormCodim(generic + (1 if m == (q + 1) * period else 2), "closed-form")
    if m < e1:
        return ClosedFormCodim(classify_components(inv, m).fiber_codim, "derived by minimum")
    if m < (q + 1) * period:
        return ClosedFormCodim(2 + generic, "closed-form")
    # (q+1)P <= m < (q+1)P + e1
    if q >= inv.q0 or m < (q + 1) * inv.beta_bar[2]:
        return ClosedFormCodim(1 + generic, "closed-form")
    return ClosedFormCodim(2 + generic, "closed-form")


def lct_minimum(inv: SemigroupInvariants, m_max: int) -> tuple[Fraction, int]:
    """``min_{1<=m<=m_max} codim(C_m^0) / (m+1)`` and the first level attaining it."""
    if m_max < inv.period - 1:
        raise ValueError(f"m_max must be at least n1*bbar1 - 1 = {inv.period - 1} to witness the minimum")
    best, argmin = None, None
    for m in range(1, m_max + 1):
        ratio = Fraction(classify_components(inv, m).fiber_codim, m + 1)
        if best is None or ratio < best:
            best, argmin = ratio, m
    expected = Fraction(1, inv.beta0) + Fraction(1, inv.beta1)
    assert best == expected, (best, expected)
    assert (argmin + 1) % inv.period == 0, argmin
    return best, argmin


@dataclass(frozen=True)
class DimensionLine:
    """``dim C_m^0 = slope * m + intercept`` for ``m`` in one residue class."""

    residue: int
    slope: Fraction
    intercept: Fraction

    def __call__(self, m: int) -> Fraction:
        return self.slope * m + self.intercept


def fiber_dim(inv: SemigroupInvariants, m: int) -> int:
    return 2 * (m + 1) - classify_components(inv, m).fiber_codim


def dim_linear_functions(inv: SemigroupInvariants) -> list[DimensionLine]:
    period = inv.period
    start = max(1, inv.q0 * period + inv.e1)
    lines = []
    for r in range(period):
        m0 = start + (r - start) % period
        d0, d1 = fiber_dim(inv, m0), fiber_dim(inv, m0 + period)
        slope = Fraction(d1 - d0, period)
        line = DimensionLine(r, slope, d0 - slope * m0)
        assert line(m0 + 2 * period) == fiber_dim(inv, m0 + 2 * period), r
        lines.append(line)
    return lines

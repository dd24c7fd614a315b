"""Characteristic sequences and semigroups of plane branches.

A branch is described either by its Puiseux characteristic sequence
``(beta0; beta1, ..., beta_g)`` or by the minimal generators
``(bbar0, ..., bbar_g)`` of its semigroup of values.  The two are equivalent
data; everything else in the package reads from :class:`SemigroupInvariants`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from typing import Sequence


class InvalidSemigroupError(ValueError):
    """Raised when Puiseux or semigroup data fail a defining condition."""


def _gcd_chain(values: Sequence[int]) -> list[int]:
    chain = [values[0]]
    for v in values[1:]:
        chain.append(gcd(chain[-1], v))
    return chain


@dataclass(frozen=True)
class CharacteristicSequence:
    """Puiseux data ``(beta0; beta1, ..., beta_g)`` of a singular branch."""

    beta0: int
    betas: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "betas", tuple(int(b) for b in self.betas))
        problem = self._first_violation()
        if problem:
            raise InvalidSemigroupError(f"invalid characteristic sequence {self}: {problem}")

    def _first_violation(self) -> str | None:
        if self.beta0 < 2:
            return f"multiplicity beta0 = {self.beta0} must be >= 2 (smooth branches are excluded)"
        if not self.betas:
            return "needs at least one Puiseux exponent (g >= 1)"
        seq = (self.beta0, *self.betas)
        for i in range(1, len(seq)):
            if seq[i] <= seq[i - 1]:
                return f"exponents must increase strictly, but beta{i - 1} = {seq[i - 1]} >= beta{i} = {seq[i]}"
        e = _gcd_chain(seq)
        for i in range(1, len(e)):
            if e[i] == e[i - 1]:
                return f"gcd chain must drop at every exponent, but e{i} = e{i - 1} = {e[i]}"
        if e[-1] != 1:
            return f"gcd chain must end at 1, got e_g = {e[-1]}"
        return None

    @property
    def g(self) -> int:
        return len(self.betas)

    def beta(self, i: int) -> int:
        """``beta_i`` with ``beta_0`` the multiplicity."""
        return self.beta0 if i == 0 else self.betas[i - 1]

    @classmethod
    def parse(cls, text: str) -> "CharacteristicSequence":
        """Parse ``"4;6,9"`` (whitespace tolerated)."""
        head, sep, tail = text.replace(" ", "").partition(";")
        if not sep:
            raise InvalidSemigroupError(f"characteristic sequence {text!r} must look like 'beta0;beta1,...'")
        try:
            beta0 = int(head)
            betas = tuple(int(b) for b in tail.split(",") if b)
        except ValueError:
            raise InvalidSemigroupError(f"non-integer entry in characteristic sequence {text!r}") from None
        return cls(beta0, betas)

    def __str__(self):
        return f"{self.beta0};" + ",".join(str(b) for b in self.betas)


@dataclass(frozen=True)
class SemigroupInvariants:
    """Derived constants of a branch.

    ``e[i] = gcd(bbar_0..bbar_i)``, ``n[i-1] = e[i-1] / e[i]`` and
    ``m_seq[i-1] = beta_i / e[i]`` (lists are stored 0-based, so ``n[0]`` is
    ``n_1``).  ``period`` is ``n_1 * bbar_1 = lcm(bbar_0, bbar_1)``.
    """

    charseq: CharacteristicSequence
    beta_bar: tuple[int, ...]
    e: tuple[int, ...]
    n: tuple[int, ...]
    m_seq: tuple[int, ...]
    q0: int
    lcm01: int = field(repr=False)

    @property
    def g(self) -> int:
        return len(self.beta_bar) - 1

    @property
    def beta0(self) -> int:
        return self.beta_bar[0]

    @property
    def beta1(self) -> int:
        return self.beta_bar[1]

    @property
    def e1(self) -> int:
        return self.e[1]

    @property
    def n1(self) -> int:
        return self.n[0]

    @property
    def m1(self) -> int:
        return self.m_seq[0]

    @property
    def period(self) -> int:
        return self.lcm01

    def n_at(self, i: int) -> int:
        """``n_i`` for ``1 <= i <= g``; ``n_{g+1} = 1`` by convention."""
        if i == self.g + 1:
            return 1
        return self.n[i - 1]

    def n_product(self, lo: int, hi: int) -> int:
        """``n_lo * ... * n_hi`` (empty product is 1)."""
        return prod(self.n_at(i) for i in range(lo, hi + 1))

    def __str__(self):
        return ",".join(str(b) for b in self.beta_bar)


def derive_invariants(cs: CharacteristicSequence) -> SemigroupInvariants:
    """Compute the semigroup generators and gcd data of ``cs``."""
    g = cs.g
    seq = [cs.beta(i) for i in range(g + 1)]
    e = _gcd_chain(seq)
    n = [e[i - 1] // e[i] for i in range(1, g + 1)]
    m_seq = [seq[i] // e[i] for i in range(1, g + 1)]

    beta_bar = [seq[0], seq[1]]
    for i in range(2, g + 1):
        value = Fraction(seq[i]) + sum(
            Fraction(e[k - 1] - e[k], e[i - 1]) * seq[k] for k in range(1, i)
        )
        if value.denominator != 1:
            raise ArithmeticError(f"bbar_{i} = {value} is not an integer")
        beta_bar.append(int(value))
    for i in range(1, g):
        recursed = n[i - 1] * beta_bar[i] + seq[i + 1] - seq[i]
        if recursed != beta_bar[i + 1]:
            raise ArithmeticError(f"bbar_{i + 1}: closed form {beta_bar[i + 1]} != recursion {recursed}")

    if g >= 2:
        gap = beta_bar[2] - n[0] * beta_bar[1]
        q0 = -(-e[1] // gap) - 1
        assert 0 <= q0 < n[1], (q0, n[1])
    else:
        q0 = 0
    return SemigroupInvariants(
        charseq=cs,
        beta_bar=tuple(beta_bar),
        e=tuple(e),
        n=tuple(n),
        m_seq=tuple(m_seq),
        q0=q0,
        lcm01=n[0] * beta_bar[1],
    )


def _semigroup_violation(beta_bar: Sequence[int]) -> str | None:
    if len(beta_bar) < 2:
        return "needs at least two generators (g >= 1)"
    if any(b <= 0 for b in beta_bar):
        return "generators must be positive"
    if beta_bar[0] < 2:
        return f"bbar0 = {beta_bar[0]} must be >= 2"
    if beta_bar[1] <= beta_bar[0]:
        return f"bbar0 < bbar1 fails ({beta_bar[0]} >= {beta_bar[1]})"
    e = _gcd_chain(beta_bar)
    for i in range(1, len(e)):
        if e[i] >= e[i - 1]:
            return f"gcd chain not strictly decreasing at e{i} = {e[i]}"
    if e[-1] != 1:
        return f"gcd chain must end at 1, got e_g = {e[-1]}"
    for i in range(1, len(beta_bar) - 1):
        n_i = e[i - 1] // e[i]
        if n_i * beta_bar[i] >= beta_bar[i + 1]:
            return (
                f"violates n{i}*bbar{i} < bbar{i + 1} "
                f"({n_i * beta_bar[i]} >= {beta_bar[i + 1]})"
            )
    return None


def validate_semigroup(beta_bar: Sequence[int]) -> None:
    problem = _semigroup_violation(beta_bar)
    if problem:
        raise InvalidSemigroupError(f"invalid semigroup {tuple(beta_bar)}: {problem}")


def puiseux_from_semigroup(beta_bar: Sequence[int]) -> CharacteristicSequence:
    """Recover the characteristic sequence from the semigroup generators."""
    beta_bar = [int(b) for b in beta_bar]
    validate_semigroup(beta_bar)
    e = _gcd_chain(beta_bar)
    betas = [beta_bar[1]]
    for i in range(1, len(beta_bar) - 1):
        n_i = e[i - 1] // e[i]
        betas.append(beta_bar[i + 1] - n_i * beta_bar[i] + betas[-1])
    cs = CharacteristicSequence(beta_bar[0], tuple(betas))
    assert derive_invariants(cs).beta_bar == tuple(beta_bar)
    return cs


def invariants_from_semigroup(beta_bar: Sequence[int]) -> SemigroupInvariants:
    return derive_invariants(puiseux_from_semigroup(beta_bar))


def parse_semigroup(text: str) -> tuple[int, ...]:
    """Parse ``"4,6,15"`` (whitespace tolerated)."""
    try:
        values = tuple(int(v) for v in text.replace(" ", "").split(",") if v)
    except ValueError:
        raise InvalidSemigroupError(f"non-integer entry in semigroup {text!r}") from None
    validate_semigroup(values)
    return values


def format_semigroup(beta_bar: Sequence[int]) -> str:
    return ",".join(str(b) for b in beta_bar)


def in_semigroup(value: int, generators: Sequence[int]) -> bool:
    """Membership of ``value`` in the monoid generated by ``generators``."""
    if value < 0:
        return False
    reachable = bytearray(value + 1)
    reachable[0] = 1
    for gen in sorted(set(generators)):
        for v in range(gen, value + 1):
            if reachable[v - gen]:
                reachable[v] = 1
    return bool(reachable[value])


def _contact_offsets(cs: CharacteristicSequence) -> tuple[list[int], list[Fraction]]:
    """gcd chain and the partial sums sum_{k<i} (e_{k-1}-e_k)/beta0 * beta_k."""
    e = _gcd_chain([cs.beta(i) for i in range(cs.g + 1)])
    sums = [Fraction(0)]
    for k in range(1, cs.g + 1):
        sums.append(sums[-1] + Fraction(e[k - 1] - e[k], cs.beta0) * cs.beta(k))
    return e, sums


def intersection_via_contact(cs: CharacteristicSequence, p: int, o) -> int:
    """Intersection number with a branch of multiplicity ``p`` and contact ``o``."""
    o = Fraction(o)
    if p <= 0 or o <= 0:
        raise ValueError("multiplicity and contact order must be positive")
    e, sums = _contact_offsets(cs)
    i = next((i for i in range(1, cs.g + 1) if o <= Fraction(cs.beta(i), cs.beta0)), cs.g + 1)
    value = p * (sums[i - 1] + e[i - 1] * o)
    if value.denominator != 1:
        raise ValueError(f"inconsistent input: p={p}, o={o} gives non-integral intersection {value}")
    return int(value)


def contact_from_intersection(cs: CharacteristicSequence, p: int, v: int) -> Fraction:
    """Invert :func:`intersection_via_contact` for fixed ``cs`` and ``p``."""
    if p <= 0 or v <= 0:
        raise ValueError(f"intersection {v} is not attainable with multiplicity {p}")
    e, sums = _contact_offsets(cs)
    target = Fraction(v, p)
    for i in range(1, cs.g + 2):
        if i <= cs.g and target > sums[i - 1] + e[i - 1] * Fraction(cs.beta(i), cs.beta0):
            continue
        o = (target - sums[i - 1]) / e[i - 1]
        lower = Fraction(cs.beta(i - 1), cs.beta0) if i > 1 else Fraction(0)
        if not o > lower:
            break
        return o
    raise ValueError(f"intersection {v} is not attainable with multiplicity {p}")


def random_semigroup(rng, max_g: int = 3, max_beta0: int = 30, max_entry: int = 400) -> tuple[int, ...]:
    """Draw a valid semigroup with ``g <= max_g`` and all generators ``<= max_entry``.

    ``rng`` is a :class:`random.Random`.  Draws are retried until every
    condition holds, so the distribution is only roughly uniform.
    """
    while True:
        beta0 = rng.randint(2, max_beta0)
        divisors = [d for d in range(1, beta0) if beta0 % d == 0]
        chain = [beta0]
        while chain[-1] > 1 and len(chain) <= max_g:
            options = [d for d in divisors if d < chain[-1] and chain[-1] % d == 0]
            if len(chain) == max_g:
                options = [1]
            chain.append(rng.choice(options))
        if chain[-1] != 1:
            continue
        gens = [beta0]
        ok = True
        for i in range(1, len(chain)):
            low = gens[0] + 1 if i == 1 else (chain[i - 2] // chain[i - 1]) * gens[-1] + 1
            candidates = [
                b for b in range(low, max_entry + 1) if gcd(chain[i - 1], b) == chain[i]
            ]
            if not candidates:
                ok = False
                break
            # favour small values so that deeper chains still fit under max_entry
            gens.append(candidates[min(len(candidates) - 1, int(rng.expovariate(1 / 8)))])
        if ok and _semigroup_violation(gens) is None:
            return tuple(gens)

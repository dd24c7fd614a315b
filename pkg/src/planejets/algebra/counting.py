"""Finite-field point counts of jet fibers over the origin.

The kernel lives in a compiled extension when it was built; otherwise the
pure-Python version is used.  ``BACKEND`` names the one in use, and
``PLANEJETS_BACKEND=python`` forces the fallback.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import _count_py
from .polynomial import PlanePolynomial

try:
    if os.environ.get("PLANEJETS_BACKEND", "").lower() == "python":
        raise ImportError("fallback requested")
    from . import _count_fast as _kernel
    BACKEND = "cython"
except ImportError:
    _kernel = _count_py
    BACKEND = "python"

KERNELS = {"python": _count_py}
if BACKEND == "cython":
    KERNELS["cython"] = _kernel

DEFAULT_BUDGET = 10**8


class BudgetExceededError(RuntimeError):
    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def reduce_mod(f: PlanePolynomial, p: int) -> list[tuple[int, int, int]]:
    """Coefficients of ``f`` in ``F_p``; rejects primes dividing a denominator."""
    out = []
    for (a, b), c in sorted(f.coeffs.items()):
        c = Fraction(c)
        if c.denominator % p == 0:
            raise ValueError(f"p = {p} divides the denominator of the coefficient of x^{a}*y^{b}")
        out.append((a, b, c.numerator * pow(c.denominator, -1, p) % p))
    return out


def _run_shard(args):
    backend, terms, m, p, budget, shard = args
    kernel = KERNELS[backend]
    try:
        return kernel.count_points(terms, m, p, budget, shard)
    except kernel.KernelBudgetExceeded as exc:
        return None, exc.args[0]


def fiber_point_count(
    f: PlanePolynomial,
    m: int,
    p: int,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    backend: str | None = None,
    with_evaluations: bool = False,
):
    """Number of ``(x0^(1..m), x1^(1..m))`` in ``F_p`` with ``F^(1..m) = 0``.

    ``budget`` caps the number of prefix evaluations (one per partial
    assignment that reaches a new order).  With ``workers > 1`` the search is
    sharded on the value of ``x0^(1)`` and each shard gets the full budget;
    the total is checked afterwards.
    """
    if m < 0:
        raise ValueError("level must be non-negative")
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if budget <= 0:
        raise ValueError("budget must be positive")
    backend = backend or BACKEND
    if backend not in KERNELS:
        raise ValueError(f"backend {backend!r} unavailable (have {sorted(KERNELS)})")
    if backend == "cython" and p >= 2**31:
        backend = "python"
    terms = reduce_mod(f, p)
    constant = dict(((a, b), c) for a, b, c in terms).get((0, 0), 0)
    terms = [t for t in terms if (t[0], t[1]) != (0, 0)]
    if constant:
        result = (0, 0)
    elif workers <= 1 or m < 1:
        result = _run_shard((backend, terms, m, p, budget, -1))
    else:
        jobs = [(backend, terms, m, p, budget, s) for s in range(p)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_shard, jobs))
        if any(c is None for c, _ in parts):
            result = (None, sum(e for _, e in parts))
        else:
            result = (sum(c for c, _ in parts), sum(e for _, e in parts))
    count, evaluations = result
    if count is None or evaluations > budget:
        raise BudgetExceededError(
            f"point count at m={m}, p={p} needs more than {budget} evaluations "
            f"(stopped after {evaluations}); raise --budget",
            required=evaluations,
        )
    return (count, evaluations) if with_evaluations else count


@dataclass(frozen=True)
class PrimeEvidence:
    p: int
    count: int
    dim: int
    coefficient: int
    residual: int


@dataclass(frozen=True)
class DimensionEstimate:
    dim: int
    top_components: int
    evidence: tuple[PrimeEvidence, ...]
    inconclusive: bool


def fit_power(count: int, p: int) -> PrimeEvidence:
    if count <= 0:
        return PrimeEvidence(p, count, -1, 0, count)
    d, power = 0, 1
    while power * p <= count:
        power *= p
        d += 1
    coefficient = (2 * count + power) // (2 * power)  # round half up
    return PrimeEvidence(p, count, d, coefficient, count - coefficient * power)


def dimension_estimate(
    f: PlanePolynomial, m: int, primes, budget: int = DEFAULT_BUDGET, workers: int = 1
) -> DimensionEstimate:
    """Fit ``count ~ c * p^d`` for each prime.

    ``d`` is the exponent with ``p^d <= count < p^(d+1)`` and ``c`` the nearest
    integer to ``count / p^d``; the reported ``c`` comes from the largest prime.
    Disagreement between primes sets ``inconclusive``.
    """
    primes = sorted(set(primes))
    if not primes:
        raise ValueError("need at least one prime")
    evidence = tuple(fit_power(fiber_point_count(f, m, p, budget, workers), p) for p in primes)
    dims = {e.dim for e in evidence}
    coefficients = {e.coefficient for e in evidence}
    top = evidence[-1]
    return DimensionEstimate(top.dim, top.coefficient, evidence, len(dims) > 1 or len(coefficients) > 1)

import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from planejets.semigroup import invariants_from_semigroup, random_semigroup

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

REFERENCE_SEMIGROUPS = [(2, 3), (4, 6, 15), (4, 6, 13), (8, 12, 30, 63)]


def semigroups(max_g=3, max_beta0=30, max_entry=200):
    """Hypothesis strategy drawing valid semigroups through a seeded generator."""
    return st.integers(0, 2**32 - 1).map(
        lambda seed: random_semigroup(random.Random(seed), max_g, max_beta0, max_entry)
    )


@pytest.fixture(params=REFERENCE_SEMIGROUPS, ids=lambda g: ",".join(map(str, g)))
def reference_inv(request):
    return invariants_from_semigroup(request.param)


# Acceptance lines are collected by tests/test_acceptance.py and printed at the end.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from gaaf.algebra import G3, Multivector, Signature  # noqa: E402

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

coeff = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


def multivectors(sig: Signature = G3):
    return st.lists(coeff, min_size=sig.size, max_size=sig.size).map(lambda c: Multivector(sig, c))


def vectors(sig: Signature = G3):
    def build(c):
        full = np.zeros(sig.size)
        for k, x in enumerate(c):
            full[1 << k] = x
        return Multivector(sig, full)

    return st.lists(coeff, min_size=sig.n, max_size=sig.n).map(build)


signatures = st.tuples(st.integers(0, 3), st.integers(0, 2), st.integers(0, 1)).filter(
    lambda t: 1 <= sum(t) <= 5
).map(lambda t: Signature(*t))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance criteria register their verdicts here for the terminal summary
ACCEPTANCE: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")

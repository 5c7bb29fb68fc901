from __future__ import annotations

import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from pathext.core import Tournament

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def tournaments(draw, min_n: int = 2, max_n: int = 9) -> Tournament:
    n = draw(st.integers(min_n, max_n))
    m = n * (n - 1) // 2
    code = draw(st.integers(0, (1 << m) - 1))
    return Tournament.from_pairs(n, format(code, f"0{m}b") if m else "")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for num in sorted(results):
            terminalreporter.write_line(results[num][1])

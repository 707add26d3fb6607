"""Shared hypothesis strategies."""

from fractions import Fraction

from hypothesis import settings
from hypothesis import strategies as st

from tropex.semiring import ExplodedValue, GaussianRational

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

rationals = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))
gaussians = st.builds(GaussianRational, rationals, rationals)
exploded = st.builds(ExplodedValue, gaussians, rationals)

# Filled by the acceptance suite and echoed at the end of the run.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

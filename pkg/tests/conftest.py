import pytest
from fractions import Fraction

from hypothesis import settings, strategies as st

from convexdiff import Polytope, arith

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# pass/fail lines collected by test_acceptance.py
ACCEPTANCE = []


def record(name, passed, detail=""):
    ACCEPTANCE.append((name, bool(passed), detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE:
        line = f"{'PASS' if passed else 'FAIL'}  {name}"
        terminalreporter.write_line(f"{line}  ({detail})" if detail else line)


@pytest.fixture(autouse=True)
def _rational_mode():
    with arith.arithmetic("rational"):
        yield


coords = st.integers(-16, 16).map(lambda k: Fraction(k, 8))
points = st.tuples(coords, coords)


@st.composite
def polygons(draw, max_points=7):
    pts = draw(st.lists(points, min_size=1, max_size=max_points))
    return Polytope(pts)


def sq(a, b):
    """Axis-aligned square [a, b]^2."""
    return Polytope([(a, a), (b, a), (b, b), (a, b)])

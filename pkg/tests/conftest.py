import os
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from siegel_twists.exactfield import CycNum, totient

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

small_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


# conductors dividing 60 keep the common embedding of several draws small
CONDUCTORS = [m for m in range(1, 61) if 60 % m == 0]


@st.composite
def cycnums(draw):
    m = draw(st.sampled_from(CONDUCTORS))
    coords = draw(st.lists(small_fractions, min_size=totient(m), max_size=totient(m)))
    return CycNum(m, coords)


@pytest.fixture
def rng():
    return random.Random(12345)


def frac(x):
    return Fraction(x)


_criteria = {}


@pytest.fixture(autouse=True)
def _criterion_label(request):
    marker = request.node.get_closest_marker("criterion")
    if marker is not None:
        request.node.user_properties.append(("criterion", marker.args))
    yield


def pytest_runtest_logreport(report):
    label = dict(report.user_properties).get("criterion")
    if label is None:
        return
    number, title = label
    entry = _criteria.setdefault(number, {"title": title, "ok": True, "seconds": 0.0})
    if report.failed:
        entry["ok"] = False
    if report.when == "call":
        entry["seconds"] += report.duration


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {entry['title']} ({entry['seconds']:.2f} s)")

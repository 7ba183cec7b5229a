import random

import pytest
from hypothesis import settings

from gersten_lab.rings import make_ring

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

RING_SPECS = ["Z@5", "Q[t]@t"]


@pytest.fixture
def Z5():
    return make_ring("Z@5")


@pytest.fixture
def Qt():
    return make_ring("Q[t]@t")


@pytest.fixture(params=RING_SPECS)
def ring(request):
    return make_ring(request.param)


@pytest.fixture
def rng():
    return random.Random(20240611)


# acceptance criteria report: one line per criterion at the end of the run
ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, note = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}  ({note})")

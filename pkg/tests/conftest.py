import functools

import pytest

from curvelab.curves import catalog_curve
from curvelab.frenet import sample_uniform_arclength

# analytic fixtures with nowhere-vanishing curvature
FIXTURES = {
    "circular_helix(2,1)": ("circular_helix", (2, 1)),
    "circle(1)": ("circle", (1,)),
    "twisted_cubic": ("twisted_cubic", ()),
    "salkowski(0.5)": ("salkowski", (0.5,)),
    "anti_salkowski(0.5)": ("anti_salkowski", (0.5,)),
}


@functools.lru_cache(maxsize=None)
def fixture_samples(label, n=256):
    name, params = FIXTURES[label]
    return sample_uniform_arclength(catalog_curve(name, params), n)


@pytest.fixture(params=sorted(FIXTURES))
def fixture_label(request):
    return request.param


@pytest.fixture
def helix_samples():
    return fixture_samples("circular_helix(2,1)")


def pytest_terminal_summary(terminalreporter):
    acceptance = __import__("sys").modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, ok, detail = results[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}: {detail}")

import pytest

from dualgalois.curve import load_curve
from helpers import CURVE_DIR, CURVES


@pytest.fixture(params=sorted(CURVES))
def curve_name(request):
    return request.param


@pytest.fixture
def curve_dir():
    return CURVE_DIR


@pytest.fixture
def loaded():
    return lambda name: load_curve(CURVE_DIR / f"{name}.json")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, text = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {text}")

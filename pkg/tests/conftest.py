import math

import mpmath
import pytest

from pcsent.states import TruncationPolicy


@pytest.fixture
def tight():
    return TruncationPolicy.tolerance(1e-16)


def mp_weights(zeta_abs, n_max, dps=40):
    """High-precision f_n for n = 0..n_max, independent of pcsent."""
    with mpmath.workdps(dps):
        z = mpmath.mpf(zeta_abs)
        i0 = mpmath.besseli(0, 2 * z)
        return [z ** (2 * n) / (i0 * mpmath.factorial(n) ** 2) for n in range(n_max + 1)]


def mp_entropy(probs):
    return float(-sum(p * mpmath.log(p, 2) for p in probs if p > 0))


PI4 = math.pi / 4


_LABELS = {}
_OUTCOMES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label, title): exit criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            label, title = mark.args
            suffix = f" [{item.callspec.id}]" if hasattr(item, "callspec") else ""
            _LABELS[item.nodeid] = f"{label} {title}{suffix}"


def pytest_runtest_logreport(report):
    if report.nodeid in _LABELS and (report.when == "call" or report.failed):
        _OUTCOMES[report.nodeid] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, label in _LABELS.items():
        if nodeid in _OUTCOMES:
            terminalreporter.write_line(f"{_OUTCOMES[nodeid]}  {label}")

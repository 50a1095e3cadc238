import numpy as np
import pytest

from slcod.field import make_field
from slcod.matrix import Mat


@pytest.fixture(scope="session")
def gf7():
    return make_field(7)


@pytest.fixture(scope="session")
def gf13():
    return make_field(13)


def random_traceless(F, n, rng):
    a = rng.integers(0, F.q, size=(n, n))
    a[n - 1, n - 1] = 0
    a[n - 1, n - 1] = F.neg(int(F.vsum(np.diagonal(a).astype(np.int64))))
    return Mat(F, a)


def random_invertible(F, n, rng):
    while True:
        g = Mat(F, rng.integers(0, F.q, size=(n, n)))
        if g.det():
            return g


# -- acceptance reporting ----------------------------------------------------

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    n, title = mark.args
    entry = _criteria.setdefault(n, {"title": title, "ok": True, "failed": []})
    if rep.failed:
        entry["ok"] = False
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        line = f"criterion {n}: {'PASS' if e['ok'] else 'FAIL'}  {e['title']}"
        if e["failed"]:
            line += f"  (failed: {', '.join(e['failed'])})"
        terminalreporter.write_line(line)

import pytest
from hypothesis import HealthCheck, settings
from mpmath import mp, mpc, mpf

from fkasym.core import PrecisionContext

settings.register_profile("ci", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")


def rel(a, b):
    a, b = mpc(a), mpc(b)
    return abs(a - b) / max(abs(b), mpf(10) ** -300)


@pytest.fixture
def ctx():
    return PrecisionContext(16)


@pytest.fixture
def ctx30():
    return PrecisionContext(30)


@pytest.fixture(autouse=True)
def _restore_dps():
    dps = mp.dps
    yield
    mp.dps = dps


# one line per acceptance criterion, printed after the run
ACCEPTANCE = {}


def record(cid: str, ok: bool, detail: str):
    ACCEPTANCE[cid] = (ok, detail)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE, key=lambda c: (len(c), c)):
        ok, detail = ACCEPTANCE[cid]
        terminalreporter.write_line(f"{cid} {'PASS' if ok else 'FAIL'}  {detail}")

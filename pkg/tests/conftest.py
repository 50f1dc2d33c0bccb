import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")

# criterion id -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE = {}


def record(cid, name, passed, detail=""):
    ACCEPTANCE[cid] = (name, bool(passed), detail)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE):
        name, ok, detail = ACCEPTANCE[cid]
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] {cid}. {name}: {detail}")


_SERIES = {}


def desk_series(K, D=1000, t_max=36):
    """Correlator series shared across test modules (each costs seconds at D=1000)."""
    from otoclab.quantum import MapParams, compute_correlators

    key = (K, D, t_max)
    if key not in _SERIES:
        _SERIES[key] = compute_correlators(MapParams(K, D), t_max)
    return _SERIES[key]


@pytest.fixture(scope="session")
def series_66():
    return desk_series(6.6)


@pytest.fixture(scope="session")
def series_17():
    return desk_series(17.0)

import numpy as np
import pytest


def random_density(d, rng, rank=None):
    rank = rank or d
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_ket(d, rng):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_unitary(d, rng):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def full_sweeps():
    """Every combination (m = 1..6) of three completely depolarizing channels, d = 2 and 3."""
    from qswitch.cli import RunConfig, cmd_sweep

    return {d: cmd_sweep(RunConfig(command="sweep", N=3, d=d, m="all")) for d in (2, 3)}


ACCEPTANCE_FILE = "test_acceptance.py"


def pytest_terminal_summary(terminalreporter):
    reports = [r for key in ("passed", "failed", "error")
               for r in terminalreporter.stats.get(key, [])
               if getattr(r, "when", "") == "call" and ACCEPTANCE_FILE in r.nodeid]
    if not reports:
        return
    terminalreporter.section("acceptance criteria")
    for r in sorted(reports, key=lambda r: r.nodeid):
        name = r.nodeid.split("::")[-1]
        terminalreporter.write_line(f"{'PASS' if r.passed else 'FAIL'}  {name}")

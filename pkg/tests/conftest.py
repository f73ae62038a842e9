import numpy as np
import pytest

from complex_ipea import linalg, resonance


def random_complex(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_unitary(rng, n):
    q, r = np.linalg.qr(random_complex(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def resonance_u():
    return linalg.expm(1j * resonance.HAMILTONIAN)


@pytest.fixture(scope="session")
def resonance_pair(resonance_u):
    return linalg.eig_dominant(resonance_u, seed=0)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion (parametrized cases are merged)."""
    verdicts = {}
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call" or "test_acceptance.py::test_criterion_" not in rep.nodeid:
                continue
            name = rep.nodeid.split("::")[-1].split("[")[0]
            ok = verdicts.get(name, True) and outcome == "passed"
            verdicts[name] = ok
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(verdicts):
        number = int(name.split("_")[2])
        label = name.split("_", 3)[3].replace("_", " ")
        verdict = "PASS" if verdicts[name] else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {label}")

import numpy as np
import pytest

from vekuawave import build_profile, fit_auto, PowerLaw, Constant


@pytest.fixture(scope="session")
def inv_square5():
    """eps = (2x+1)^-2 on [0, 5], 5001 nodes, with its fitted operators."""
    prof = build_profile(PowerLaw(2.0, 1.0, -2.0), mu=1.0, x_max=5.0, n_points=5001)
    coeffs, powers = fit_auto(prof, N_max=30)
    return prof, coeffs, powers


@pytest.fixture(scope="session")
def inv_square6():
    prof = build_profile(PowerLaw(2.0, 1.0, -2.0), mu=1.0, x_max=6.0, n_points=5001)
    coeffs, powers = fit_auto(prof, N_max=30)
    return prof, coeffs, powers


@pytest.fixture(scope="session")
def power_law15():
    """eps = (5x+1)^(-8/5) on [0, 2], 2001 nodes; f = (1+xi)^-2."""
    prof = build_profile(PowerLaw(5.0, 1.0, -1.6), mu=1.0, x_max=2.0, n_points=2001)
    coeffs, powers = fit_auto(prof, N_max=30)
    return prof, coeffs, powers


@pytest.fixture(scope="session")
def homogeneous():
    prof = build_profile(Constant(1.0), mu=1.0, x_max=1.0, n_points=1001)
    coeffs, powers = fit_auto(prof, N_max=12)
    return prof, coeffs, powers


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if getattr(rep, "when", "") == "call" and "test_acceptance.py::" in rep.nodeid:
                lines.append((rep.nodeid.split("::")[-1], key))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, key in sorted(lines):
            terminalreporter.write_line(f"{'PASS' if key == 'passed' else 'FAIL'}  {name}")

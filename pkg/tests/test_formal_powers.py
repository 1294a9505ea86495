import numpy as np
import pytest
from scipy.special import comb

from vekuawave.formal_powers import PowersError, build_powers, wave_polynomials, wave_traces


def test_homogeneous_powers_are_monomials(homogeneous):
    prof = homogeneous[0]
    pw = build_powers(prof, 12)
    xi = prof.xi
    for n in range(13):
        mono = xi ** n
        for arr in (pw.X, pw.Xt, pw.phi, pw.psi):
            assert np.abs(arr[n] - mono).max() <= 1e-10
    # relative check at xi = 1
    assert np.all(np.abs(pw.X[:, -1] - 1.0) <= 1e-10)


def test_first_recursive_integrals(inv_square5, power_law15):
    prof = inv_square5[0]
    pw = build_powers(prof, 4)
    assert np.abs(pw.X[1] - 0.5 * (np.exp(2 * prof.xi) - 1)).max() <= 1e-11
    prof3 = power_law15[0]
    pw3 = build_powers(prof3, 4)
    # weight f^2 = (1+xi)^-4
    assert np.abs(pw3.Xt[1] - (1 - (1 + prof3.xi) ** -3) / 3).max() <= 1e-12


def test_structural_invariants(power_law15):
    prof = power_law15[0]
    pw = build_powers(prof, 10)
    assert np.all(pw.X[0] == 1) and np.all(pw.Xt[0] == 1)
    assert np.allclose(pw.phi[0], prof.f) and np.allclose(pw.psi[0], 1 / prof.f)
    assert np.all(pw.X[1:, 0] == 0) and np.all(pw.phi[1:, 0] == 0)
    assert pw.phi[0, 0] == 1.0


def test_recursion_derivative(power_law15):
    prof = power_law15[0]
    pw = build_powers(prof, 6)
    f2 = prof.f ** 2
    for n in range(1, 7):
        d = np.gradient(pw.X[n], prof.xi)
        w = f2 ** (-1.0) ** n
        target = n * pw.X[n - 1] * w
        assert np.abs(d - target)[1:-1].max() <= 1e-4


def test_wave_traces(power_law15, homogeneous):
    prof = power_law15[0]
    pw = build_powers(prof, 6)
    c, s = wave_traces(pw)
    assert np.allclose(c[0], prof.f) and np.all(s[0] == 0)
    assert np.allclose(c[1], pw.phi[1]) and np.allclose(s[1], pw.phi[0] * prof.xi)
    h = build_powers(homogeneous[0], 8)
    c, s = wave_traces(h)
    xi = homogeneous[0].xi
    for n in range(9):
        assert np.allclose(c[n] + s[n], (2 * xi) ** n, rtol=1e-12, atol=1e-12)


def test_wave_polynomial_parity(power_law15):
    pw = build_powers(power_law15[0], 7)
    node = 900
    xi = pw.xi[node]
    c, s = wave_traces(pw, "psi")
    for n in range(8):
        cp, sp = wave_polynomials(pw, n, node, xi, "psi")
        cm, sm = wave_polynomials(pw, n, node, -xi, "psi")
        assert cp == pytest.approx(c[n, node], rel=1e-13, abs=1e-15)
        assert cm == pytest.approx(cp, rel=1e-13, abs=1e-15)
        assert sm == pytest.approx(-sp, rel=1e-13, abs=1e-15)
    tau = 0.3 * xi
    c5, s5 = wave_polynomials(pw, 5, node, tau)
    ref = sum(comb(5, k) * pw.phi[5 - k, node] * tau ** k for k in range(6))
    assert c5 + s5 == pytest.approx(ref, rel=1e-13)


def test_order_limits(homogeneous):
    with pytest.raises(PowersError):
        build_powers(homogeneous[0], 0)
    with pytest.raises(PowersError):
        build_powers(homogeneous[0], 65)

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.special import erf

from vekuawave.quadrature import (MeshError, UniformMesh, check_count, nc6_cumulative,
                                  power_exp_moments, spline_cumulative, trig_moments,
                                  trig_moments_table)


def test_mesh_points_and_rules():
    m = UniformMesh.over(0.0, 1.0, 11)
    assert np.allclose(m.points, np.arange(11) / 10)
    assert m.stop == pytest.approx(1.0)
    for bad in (5, 7, 10):
        with pytest.raises(MeshError):
            check_count(bad)


@pytest.mark.parametrize("g, G, tol", [
    (lambda s: np.ones_like(s), lambda x: x, 1e-14),
    (lambda s: s ** 5, lambda x: x ** 6 / 6, 1e-12),
    (np.exp, lambda x: np.exp(x) - 1, 1e-13),
])
def test_nc6_closed_forms(g, G, tol):
    m = UniformMesh.over(0.0, 1.0, 5001)
    out = nc6_cumulative(g(m.points), m.step)
    assert out[0] == 0.0
    assert np.abs(out - G(m.points)).max() <= tol


def test_nc6_polynomials_exact_on_coarse_mesh():
    m = UniformMesh.over(-1.0, 2.0, 16)
    x = m.points
    for d in range(6):
        ref = (x ** (d + 1) - (-1.0) ** (d + 1)) / (d + 1)
        got = nc6_cumulative(x ** d, m.step)
        assert np.abs(got - ref).max() <= 1e-12 * max(1.0, np.abs(ref).max())


def test_nc6_sixth_order():
    errs = []
    for n in (51, 101, 201):
        m = UniformMesh.over(0.0, 1.0, n)
        errs.append(np.abs(nc6_cumulative(np.cos(3 * m.points), m.step)
                           - np.sin(3 * m.points) / 3).max())
    rates = np.log2(np.array(errs[:-1]) / errs[1:])
    assert np.all(rates > 5.5)


def test_nc6_linear_and_batched(rng):
    m = UniformMesh.over(0.0, 2.0, 101)
    g1, g2 = rng.normal(size=101), rng.normal(size=101)
    lhs = nc6_cumulative(2 * g1 - 3j * g2, m.step)
    rhs = 2 * nc6_cumulative(g1, m.step) - 3j * nc6_cumulative(g2, m.step)
    assert np.allclose(lhs, rhs, rtol=0, atol=1e-13)
    batch = nc6_cumulative(np.stack([g1, g2]), m.step)
    assert np.allclose(batch[1], nc6_cumulative(g2, m.step))


def test_nc6_rejects_bad_length():
    with pytest.raises(MeshError):
        nc6_cumulative(np.ones(12), 0.1)


def test_spline_cumulative():
    x = np.linspace(0, 2, 101)
    assert spline_cumulative(x ** 2, x)(2.0) == pytest.approx(8 / 3, abs=1e-10)
    assert np.all(spline_cumulative(np.zeros(101), x)(x) == 0)
    s = np.linspace(-2, 2, 2001)
    F = spline_cumulative(np.exp(-4 * s ** 2), s)
    ref, _ = quad(lambda z: np.exp(-4 * z * z), -2, 2, epsabs=1e-14, epsrel=1e-14)
    assert F(2.0) - F(-2.0) == pytest.approx(ref, abs=1e-9)
    assert ref == pytest.approx(np.sqrt(np.pi) / 2 * erf(4), abs=1e-14)
    with pytest.raises(ValueError):
        spline_cumulative(np.ones(5), np.array([0, 2, 1, 3, 4.0]))


def test_trig_moment_examples():
    c, s = trig_moments(0, 1.0, np.pi)
    assert c == pytest.approx(0, abs=1e-15) and s == pytest.approx(2, abs=1e-15)
    c, s = trig_moments(1, 0.0, 2.0)
    assert (c, s) == (pytest.approx(2.0, abs=1e-15), pytest.approx(0.0, abs=1e-15))
    c, s = trig_moments(2, 10.0, 1.0)
    rc, _ = quad(lambda t: t * t * np.cos(10 * t), 0, 1, epsabs=1e-15, limit=200)
    rs, _ = quad(lambda t: t * t * np.sin(10 * t), 0, 1, epsabs=1e-15, limit=200)
    assert abs(c - rc) <= 1e-12 and abs(s - rs) <= 1e-12


def _mp_moment(k, om, xi):
    mpmath.mp.dps = 40
    c = mpmath.quad(lambda t: t ** k * mpmath.cos(om * t), [0, xi])
    s = mpmath.quad(lambda t: t ** k * mpmath.sin(om * t), [0, xi])
    return float(c), float(s)


@pytest.mark.parametrize("om, xi", [(1e-6, 0.3), (0.3, 1.0), (2.0, 1.2), (20.0, 1.1),
                                    (1.0, -0.7), (60.0, 0.9)])
def test_trig_moments_table_accuracy(om, xi):
    c, s = trig_moments_table(20, om, xi)
    for k in (0, 1, 5, 13, 20):
        rc, rs = _mp_moment(k, om, xi)
        scale = abs(xi) ** (k + 1) / (k + 1)
        assert abs(c[k] - rc) <= 1e-13 * scale + 1e-16
        assert abs(s[k] - rs) <= 1e-13 * scale + 1e-16


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 12), st.floats(-30, 30), st.floats(0.05, 2.0))
def test_cosine_moment_derivative(k, om, xi):
    h = 1e-5 * xi
    c1, _ = trig_moments(k, om, xi + h)
    c0, _ = trig_moments(k, om, xi - h)
    deriv = (c1 - c0) / (2 * h)
    target = xi ** k * np.cos(om * xi)
    assert abs(deriv - target) <= 1e-6 * (1 + abs(om)) ** 2 * max(1.0, xi ** k)


def test_power_exp_moments_shapes():
    z = np.array([[0.0, 0.5], [3.0, -40.0]])
    out = power_exp_moments(6, z)
    assert out.shape == (7, 2, 2)
    assert np.allclose(out[:, 0, 0], 1 / (np.arange(7) + 1))

import numpy as np
import pytest

from vekuawave import oracles
from vekuawave.medium import PowerLaw, build_profile
from vekuawave.signals import GaussianSignal, GeneralInitialData, TrigInitialData, TrigSignal, Zero
from vekuawave.solver import maxwell_residual, vekua_residual
from vekuawave.transmutation import exact_kernels_l15


def _order(fun, ns):
    res = np.array([fun(n) for n in ns])
    return np.log2(res[:-1] / res[1:])


def test_example1_interface_values():
    p = oracles.Example1Params()
    E, H = oracles.example1_fields(p, 0.0, 0.0)
    assert E == pytest.approx(3.0, abs=1e-15) and H == pytest.approx(-4.0, abs=1e-15)
    t = np.linspace(0, 5, 7)
    E, H = oracles.example1_fields(p, 0.0, t)
    assert np.allclose(E, 3 * np.exp(1j * p.omega0 * t), atol=1e-14)
    # with A = 0 the field is a standing wave with t-independent E/H
    q = oracles.Example1Params(A=0.0)
    E, H = oracles.example1_fields(q, 0.7, t)
    assert np.ptp(E / H) < 1e-14


def test_example1_W_matches_fields():
    p = oracles.Example1Params()
    x = np.linspace(0, 5, 11)[:, None]
    t = np.linspace(0, 5, 9)[None, :]
    xi = oracles.inverse_square_xi(p.alpha, p.beta, p.mu, x)
    W = oracles.example1_W(p, xi, t)
    E, H = oracles.example1_fields(p, x, t)
    s = p.alpha * x + p.beta
    eps = s ** -2.0
    c = 1 / np.sqrt(eps * p.mu)
    assert np.abs(W.u / np.sqrt(c * eps) - E).max() < 1e-13
    assert np.abs(-1j * W.v / np.sqrt(c * p.mu) - H).max() < 1e-13


@pytest.mark.parametrize("case", ["ex1", "ex2"])
def test_inverse_square_oracles_solve_maxwell(case):
    p = oracles.Example1Params()
    terms = oracles.example2_terms()
    fields = (lambda x, t: oracles.example1_fields(p, x, t)) if case == "ex1" else \
        (lambda x, t: oracles.example2_fields(terms, x, t))

    def res(n):
        x = np.linspace(0, 3, n)
        t = np.linspace(0, 3, n)
        E, H = fields(x[:, None], t[None, :])
        return maxwell_residual(E, H, x, t, (2 * x + 1) ** -2.0, 1.0)
    assert np.all(_order(res, [101, 201, 401]) >= 1.8)


def test_example2_interface():
    terms = oracles.example2_terms()
    t = np.linspace(-3, 3, 13)
    E, H = oracles.example2_fields(terms, 0.0, t)
    C = terms[0].C
    assert np.abs(H).max() < 1e-14
    assert np.abs(E - 4 * np.cos((C + 1) * t) - 4 * np.cos((C + 2) * t)).max() < 1e-13
    one = terms[0]
    E, _ = oracles.example2_fields(one, 0.0, 0.0)
    assert abs(E - 2.0) < 1e-14
    with pytest.raises(oracles.OracleError):
        oracles.Example2Params(Omega=0.0, alpha=0.0).check()


def test_example3_kernels_agree_with_closed_forms():
    p = oracles.Example3Params()
    ek = exact_kernels_l15(p.alpha, p.beta, p.mu)
    xi = np.linspace(0, 1, 13)[:, None]
    tau = xi * np.linspace(-1, 1, 11)[None, :]
    for which, ref in (("f", ek.K_f), ("1/f", ek.K_1f)):
        K = oracles.example3_kernel(p, xi, tau, which)
        assert np.abs(K - ref(xi, tau)).max() <= 1e-13 * np.abs(K).max()
    with pytest.raises(oracles.OracleError):
        oracles.Example3Params(ell=0.3)


def test_example3_medium_maps():
    p = oracles.Example3Params()
    prof = build_profile(PowerLaw(5.0, 1.0, -1.6), x_max=2.0, n_points=2001)
    assert np.abs(p.xi(prof.x) - prof.xi).max() < 1e-10
    assert np.abs(p.f(prof.xi) - prof.f).max() < 1e-10
    assert np.abs(p.dlogf(prof.xi) - prof.dlogf).max() < 1e-9


def test_example3_W_solves_vekua():
    p = oracles.Example3Params()
    data = GeneralInitialData(Zero(), GaussianSignal(4.0))

    def res(n):
        xi = np.linspace(0, 1.0, n)
        t = np.linspace(-1, 1, n)
        W = oracles.example3_W(p, data, xi[:, None], t[None, :])
        return vekua_residual(W, xi, t, p.dlogf(xi))
    assert np.all(_order(res, [51, 101, 201]) >= 1.9)
    t = np.linspace(-2, 2, 9)
    W0 = oracles.example3_W(p, data, 0.0, t)
    assert np.abs(W0.u - 0.5 * np.exp(-4 * t * t)).max() < 1e-15


def test_example3_quadrature_path_matches_closed_form():
    p = oracles.Example3Params()
    g = GaussianSignal(3.0, amplitude=1.5, center=0.2)
    exact = GeneralInitialData(g, g)
    wrapped = GeneralInitialData(lambda z: g(z), lambda z: g(z))
    xi = np.linspace(0, 1, 6)[:, None]
    t = np.linspace(-1, 1, 5)[None, :]
    Wa = oracles.example3_W(p, exact, xi, t)
    Wb = oracles.example3_W(p, wrapped, xi, t)
    assert np.abs(Wa.u - Wb.u).max() < 1e-13 and np.abs(Wa.v - Wb.v).max() < 1e-13
    with pytest.raises(oracles.OracleError):
        oracles.example3_W(p, wrapped, xi, t, allow_quadrature=False)


def test_characteristics_reference_matches_exact_kernels():
    p = oracles.Example3Params()
    g = GaussianSignal(4.0)
    xi, t, W = oracles.characteristics_reference(p.dlogf, Zero(), g, 1.0, -1.0, 1.0, 1 / 400)
    ref = oracles.example3_W(p, GeneralInitialData(Zero(), g), xi[:, None], t[None, :])
    assert np.abs(W.u - ref.u).max() <= 1e-8 and np.abs(W.v - ref.v).max() <= 1e-8


def test_characteristics_march_is_second_order():
    p = oracles.Example1Params()
    g = TrigSignal([p.omega0], [1.0])
    # constant g = -1 in xi: Vekua solution with exponential data is explicit
    dlogf = lambda xi: -np.ones_like(xi)
    W0 = oracles.constant_vekua_W(p.gamma, p.A, p.B, 0.0, 0.0)
    wp = lambda z: W0.plus * np.exp(1j * p.omega0 * z)
    wm = lambda z: W0.minus * np.exp(1j * p.omega0 * z)
    errs = []
    for step in (0.02, 0.01, 0.005):
        xi, t, W = oracles.characteristics_march(dlogf, wp, wm, 1.0, 0.0, 2.0, step)
        ref = oracles.constant_vekua_W(p.gamma, p.A, p.B, xi[:, None], t[None, :])
        errs.append(np.abs(W.u - ref.u).max())
    assert np.all(np.log2(np.array(errs[:-1]) / errs[1:]) > 1.9)
    assert callable(g)
    with pytest.raises(oracles.OracleError):
        oracles.characteristics_march(dlogf, wp, wm, 1.0, 0.0, 2.0, 0.3)


def test_oracle_traces_match_signal_encoding(inv_square5, power_law15):
    prof = inv_square5[0]
    t = np.linspace(-4, 4, 41)
    p = oracles.Example1Params()
    W0 = oracles.example1_W(p, 0.0, 0.0)
    d = TrigInitialData.from_gamma([p.omega0], [W0.plus], [W0.minus], prof)
    ref = oracles.example1_W(p, 0.0, t)
    enc = d.W0(t)
    assert np.abs(enc.u - ref.u).max() <= 1e-13 and np.abs(enc.v - ref.v).max() <= 1e-13
    terms = oracles.example2_terms()
    C = terms[0].C
    d = TrigInitialData.from_gamma([C + 1, -(C + 1), C + 2, -(C + 2)], np.full(4, 2.0),
                                   np.full(4, 2.0), prof)
    ref = oracles.example2_W(terms, 0.0, t)
    enc = d.W0(t)
    assert np.abs(enc.u - ref.u).max() <= 1e-13 and np.abs(enc.v - ref.v).max() <= 1e-13
    data = GeneralInitialData(Zero(), GaussianSignal(4.0))
    ref = oracles.example3_W(oracles.Example3Params(), data, 0.0, t)
    enc = data.W0(t)
    assert np.abs(enc.u - ref.u).max() <= 1e-13 and np.abs(enc.v - ref.v).max() <= 1e-13

import numpy as np
import pytest

from vekuawave.medium import (Constant, MediumError, PowerLaw, build_profile, integrate_in_xi,
                              potential_q, profile_from_table)


def test_inverse_square_travel_time(inv_square5):
    prof = inv_square5[0]
    assert prof.xi[-1] == pytest.approx(0.5 * np.log(11), abs=1e-12)
    exact = 0.5 * np.log(2 * prof.x + 1)
    assert np.abs(prof.xi - exact).max() <= 1e-12
    assert np.all(np.diff(prof.xi) > 0) and prof.xi[0] == 0.0


def test_inverse_square_derived(inv_square5):
    prof = inv_square5[0]
    assert prof.f[0] == 1.0
    assert np.abs(prof.f - np.exp(-prof.xi)).max() <= 1e-12
    assert prof.h == pytest.approx(-1.0, abs=1e-14)
    assert np.abs(prof.q - 1.0).max() <= 1e-12
    assert np.abs(prof.dlogf + 1.0).max() <= 1e-12


def test_homogeneous():
    prof = build_profile(Constant(4.0), mu=2.0, x_max=1.0, n_points=101)
    assert np.allclose(prof.xi, np.sqrt(8.0) * prof.x, atol=1e-14)
    assert np.all(prof.f == 1.0) and np.all(prof.q == 0) and prof.h == 0
    assert prof.c0 == pytest.approx(1 / np.sqrt(8.0))


def test_power_law_one_fifth(power_law15):
    prof = power_law15[0]
    assert np.abs(prof.f - (1 + prof.xi) ** -2).max() <= 1e-12
    assert prof.h == pytest.approx(-2.0, abs=1e-13)
    assert np.abs(prof.q - 6 / (1 + prof.xi) ** 2).max() <= 1e-11
    assert prof.xi[-1] == pytest.approx(11 ** 0.2 - 1, abs=1e-12)


def test_integrate_in_xi(inv_square5):
    prof = inv_square5[0]
    assert np.allclose(integrate_in_xi(np.ones(prof.n), prof), prof.xi, rtol=0, atol=1e-14)
    got = integrate_in_xi(prof.f ** -2, prof)
    assert np.abs(got - 0.5 * (np.exp(2 * prof.xi) - 1)).max() <= 1e-11
    assert np.abs(integrate_in_xi(prof.q, prof) - prof.xi).max() <= 1e-12
    with pytest.raises(MediumError):
        integrate_in_xi(np.ones(prof.n - 1), prof)


def test_potential_two_ways_converge():
    errs = []
    for n in (251, 501, 1001):
        prof = build_profile(PowerLaw(5.0, 1.0, -1.6), x_max=2.0, n_points=n)
        errs.append(np.abs(potential_q(prof, "fd") - potential_q(prof, "chain"))[2:-2].max())
    rates = np.log2(np.array(errs[:-1]) / errs[1:])
    assert np.all(rates >= 1.8)


def test_inverse_map_round_trip(power_law15):
    prof = power_law15[0]
    assert np.abs(prof.x_of_xi(prof.xi) - prof.x).max() <= 1e-10


def test_fd_fallback_matches_analytic():
    law = PowerLaw(2.0, 1.0, -2.0)
    ref = build_profile(law, x_max=1.0, n_points=2001)
    fd = build_profile(law(ref.x), x_max=1.0)
    assert fd.h == pytest.approx(ref.h, abs=1e-9)
    assert np.abs(fd.q - ref.q)[2:-2].max() <= 1e-5
    with pytest.raises(MediumError):
        build_profile(law(ref.x), x_max=1.0, fd_fallback=False)


def test_rejects_bad_input():
    with pytest.raises(MediumError):
        build_profile(lambda x: 1 - 2 * x, x_max=1.0, n_points=11)
    with pytest.raises(ValueError):
        build_profile(Constant(1.0), n_points=12)
    with pytest.raises(MediumError):
        build_profile(Constant(1.0), mu=0.0)


def test_table_round_trip(tmp_path):
    law = PowerLaw(2.0, 1.0, -2.0)
    x = np.linspace(0, 1, 501)
    e, e1, e2 = law.derivatives(x)
    path = tmp_path / "eps.txt"
    np.savetxt(path, np.column_stack([x, e, e1, e2]), header="x eps eps' eps''")
    prof = profile_from_table(path)
    ref = build_profile(law, x_max=1.0, n_points=501)
    assert np.allclose(prof.xi, ref.xi, atol=1e-14)
    assert np.allclose(prof.q, ref.q, atol=1e-12)
    resampled = profile_from_table(path, n_points=1001)
    assert resampled.xi[-1] == pytest.approx(ref.xi[-1], abs=1e-9)

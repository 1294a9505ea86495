import numpy as np
import pytest
from hypothesis import given, strategies as st

from vekuawave.bicomplex import Bicomplex, J, I_UNIT, P_MINUS, P_PLUS, mul, split

cplx = st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False)
bic = st.builds(Bicomplex, cplx, cplx)


def test_basic_products():
    assert (Bicomplex(1, 1) * Bicomplex(1, -1)).allclose(Bicomplex(0, 0))
    assert (J * J).allclose(Bicomplex(1, 0))
    ij = I_UNIT * J
    assert ij.allclose(Bicomplex(0, 1j))
    assert (ij * ij).allclose(Bicomplex(-1, 0))


def test_split_examples():
    assert split(Bicomplex(2, 3)) == (2, 3)
    assert split(Bicomplex(1j, -1j)) == (1j, -1j)
    phi, psi = 2.0 - 1j, 0.5 + 3j
    u, v = split(P_PLUS * phi + P_MINUS * psi)
    assert np.isclose(u, (phi + psi) / 2) and np.isclose(v, (phi - psi) / 2)


def test_projectors():
    assert (P_PLUS * P_PLUS).allclose(P_PLUS)
    assert (P_MINUS * P_MINUS).allclose(P_MINUS)
    assert (P_PLUS * P_MINUS).allclose(Bicomplex(0, 0))
    assert (P_PLUS + P_MINUS).allclose(Bicomplex(1, 0))


def test_no_bicomplex_division():
    with pytest.raises(TypeError):
        Bicomplex(1, 0) / Bicomplex(1, 1)
    assert (Bicomplex(2, 4) / 2).allclose(Bicomplex(1, 2))


@given(bic, bic, bic)
def test_ring_laws(a, b, c):
    assert mul(a, b).allclose(mul(b, a), rtol=1e-12, atol=1e-6)
    assert mul(mul(a, b), c).allclose(mul(a, mul(b, c)), rtol=1e-10, atol=1e-3)


@given(bic, bic)
def test_conjugation_is_multiplicative(a, b):
    assert (a * b).bar().allclose(a.bar() * b.bar(), rtol=1e-12, atol=1e-6)


@given(bic)
def test_components_reassemble(w):
    u, v = split(w)
    assert (Bicomplex(u, 0) + J * v).allclose(w)
    assert ((w + w.bar()) / 2).allclose(Bicomplex(u, 0))
    assert Bicomplex.from_projections(w.plus, w.minus).allclose(w)


def test_array_components():
    u = np.linspace(0, 1, 5)
    w = Bicomplex(u, 2 * u) * J
    assert np.allclose(w.u, 2 * u) and np.allclose(w.v, u)

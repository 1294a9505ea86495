"""Closed-form reference solutions used for validation.

Nothing here calls the fitting or transmutation machinery: the media have
analytic travel-time maps and the reference Vekua solutions are either
explicit or obtained from explicit kernels by exact Gaussian integrals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.special import comb, erf

from .bicomplex import Bicomplex


class OracleError(ValueError):
    pass


# ------------------------------------------------------------ inverse-square medium


@dataclass(frozen=True)
class Example1Params:
    """``eps = (alpha x + beta)**-2`` with ``u = exp(2 i gamma t)(A xi + B)``."""

    alpha: float = 2.0
    beta: float = 1.0
    mu: float = 1.0
    A: float = 1.0
    B: float = 3.0

    @property
    def gamma(self) -> float:
        return self.alpha / (4.0 * np.sqrt(self.mu))

    @property
    def omega0(self) -> float:
        return 2.0 * self.gamma


def _affine(alpha, beta, x):
    s = alpha * np.asarray(x, dtype=float) + beta
    if np.any(s <= 0):
        raise OracleError("alpha*x + beta must stay positive")
    return s


def inverse_square_xi(alpha, beta, mu, x):
    """Travel time for ``eps = (alpha x + beta)**-2``."""
    return np.sqrt(mu) / alpha * np.log(_affine(alpha, beta, x) / beta)


def example1_W(p: Example1Params, xi, t) -> Bicomplex:
    """Vekua solution ``e^{2 i gamma t}((1 - ij)(A xi + B) - ij A/(2 gamma))``."""
    return constant_vekua_W(p.gamma, p.A, p.B, xi, t)


def example1_fields(p: Example1Params, x, t):
    """Exact ``(E, H)`` on the broadcast of ``x`` and ``t``."""
    x, t = np.broadcast_arrays(np.asarray(x, float), np.asarray(t, float))
    s = _affine(p.alpha, p.beta, x)
    rm = np.sqrt(p.mu)
    phase = np.exp(1j * p.alpha * t / (2 * rm))
    lin = rm / p.alpha * p.A * np.log(s / p.beta) + p.B
    E = p.mu ** 0.25 * np.sqrt(s) * phase * lin
    H = -phase / (p.mu ** 0.25 * np.sqrt(s)) * (lin + 2 * p.A * rm / p.alpha)
    return E, H


@dataclass(frozen=True)
class Example2Params:
    """One travelling-standing term ``A e^{i Omega t}(...)`` on the inverse-square medium."""

    alpha: float = 2.0
    beta: float = 1.0
    mu: float = 1.0
    A: complex = 1.0
    Omega: float = 2.0

    @property
    def C(self) -> float:
        return self.alpha / (2.0 * np.sqrt(self.mu))

    @property
    def D(self) -> complex:
        return 1j * np.sqrt(complex(self.Omega ** 2 - self.C ** 2))

    def check(self):
        if abs(self.D - self.C) == 0:
            raise OracleError("D == C: the closed form is singular")


def example2_terms(alpha=2.0, beta=1.0, mu=1.0) -> list:
    """Four terms with ``Omega = +-(C+1), +-(C+2)`` and ``A = (D - C)/D``.

    Their sum has the interface trace ``W0^+- = 4 cos((C+1)t) + 4 cos((C+2)t)``.
    """
    C = alpha / (2.0 * np.sqrt(mu))
    out = []
    for Om in (C + 1, -(C + 1), C + 2, -(C + 2)):
        base = Example2Params(alpha, beta, mu, 1.0, Om)
        D = base.D
        out.append(Example2Params(alpha, beta, mu, (D - C) / D, Om))
    return out


Ex2 = Union[Example2Params, Sequence[Example2Params]]


def _terms(p: Ex2):
    return [p] if isinstance(p, Example2Params) else list(p)


def example2_W(p: Ex2, xi, t) -> Bicomplex:
    xi, t = np.broadcast_arrays(np.asarray(xi, float), np.asarray(t, float))
    u = np.zeros(xi.shape, complex)
    v = np.zeros(xi.shape, complex)
    for q in _terms(p):
        q.check()
        C, D = q.C, q.D
        e = q.A * np.exp(1j * q.Omega * t)
        u += e * (np.exp(D * xi) + (D + C) / (D - C) * np.exp(-D * xi))
        v += e * 2j * q.Omega / (D - C) * np.sinh(D * xi)
    return Bicomplex(u, v)


def example2_fields(p: Ex2, x, t):
    """Exact ``(E, H)``; a sequence of parameter sets is summed."""
    x, t = np.broadcast_arrays(np.asarray(x, float), np.asarray(t, float))
    E = np.zeros(x.shape, complex)
    H = np.zeros(x.shape, complex)
    for q in _terms(p):
        q.check()
        C, D = q.C, q.D
        s = _affine(q.alpha, q.beta, x)
        r = s / q.beta
        k = D * np.sqrt(q.mu) / q.alpha
        e = q.A * np.exp(1j * q.Omega * t)
        E += q.mu ** 0.25 * np.sqrt(s) * e * (r ** k + (D + C) / (D - C) * r ** (-k))
        H += e * q.Omega / (D - C) / (q.mu ** 0.25 * np.sqrt(s)) * (r ** k - r ** (-k))
    return E, H


# ------------------------------------------------------------ power-law medium


@dataclass(frozen=True)
class Example3Params:
    """``eps = (alpha x + beta)**(2 ell - 2)``; explicit kernels exist for ``ell = 1/5``."""

    ell: float = 0.2
    alpha: float = 5.0
    beta: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        if self.ell == 0:
            raise OracleError("ell must be non-zero")
        if abs(self.ell - 0.2) > 1e-14:
            raise OracleError("explicit kernels are available only for ell = 1/5")

    @property
    def scale(self) -> float:
        return self.alpha * self.ell / (np.sqrt(self.mu) * self.beta ** self.ell)

    def eps(self, x):
        return _affine(self.alpha, self.beta, x) ** (2 * self.ell - 2)

    def xi(self, x):
        s = _affine(self.alpha, self.beta, x)
        return np.sqrt(self.mu) / (self.alpha * self.ell) * (s ** self.ell - self.beta ** self.ell)

    def f(self, xi):
        return (1 + self.scale * np.asarray(xi, float)) ** (-(1 - self.ell) / (2 * self.ell))

    def dlogf(self, xi):
        c = self.scale
        return -(1 - self.ell) / (2 * self.ell) * c / (1 + c * np.asarray(xi, float))


def kernel_coefficients(p: Example3Params, xi, which: str = "f") -> np.ndarray:
    """Coefficients ``k_j(xi)`` with ``K(xi, tau) = sum_j k_j(xi) tau**j``, shape ``(4,) + xi.shape``."""
    c = p.scale
    s = 1.0 + c * np.asarray(xi, float)
    out = np.zeros((4,) + s.shape)
    if which == "f":
        w = 3.0 / (4.0 * s * s)
        out[0] = -0.25 - w
        out[1] = 0.75 + w
        out[2] = w
        out[3] = -w
    elif which == "1/f":
        xs = c * np.asarray(xi, float)
        out[0] = (3 * xs * xs + 6 * xs + 4) / (4 * s)
        out[1] = 2.0 / (4 * s)
        out[2] = -3.0 / (4 * s)
    else:
        raise ValueError(f"unknown kernel {which!r}")
    return out * c ** (1 + np.arange(4)).reshape((4,) + (1,) * s.ndim)


def example3_kernel(p: Example3Params, xi, tau, which: str = "f"):
    k = kernel_coefficients(p, np.asarray(xi, float), which)
    tau = np.asarray(tau, float)
    return ((k[3] * tau + k[2]) * tau + k[1]) * tau + k[0]


def _gauss_power_integrals(a, jmax, lo, hi):
    # G_i = int_lo^hi s^i exp(-a s^2) ds by the reduction formula
    ra = np.sqrt(a)
    elo, ehi = np.exp(-a * lo * lo), np.exp(-a * hi * hi)
    G = [0.5 * np.sqrt(np.pi / a) * (erf(ra * hi) - erf(ra * lo)), (elo - ehi) / (2 * a)]
    for i in range(2, jmax + 1):
        G.append((lo ** (i - 1) * elo - hi ** (i - 1) * ehi) / (2 * a) + (i - 1) / (2 * a) * G[i - 2])
    return G


def _gaussian_kernel_integral(k, amp, a, center, xi, shift_sign, t):
    """``int_{-xi}^{xi} K(xi,tau) amp exp(-a (t + shift_sign*tau - center)^2) dtau``."""
    # substitute tau = s + m so that the exponent becomes -a s^2
    m = shift_sign * (center - t)
    G = _gauss_power_integrals(a, 3, -xi - m, xi - m)
    total = 0.0
    for j in range(4):
        inner = sum(comb(j, i, exact=True) * m ** (j - i) * G[i] for i in range(j + 1))
        total = total + k[j] * inner
    return amp * total


def _quadrature_kernel_integral(k, fun, xi, shift_sign, t, n=200):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    tau = xi[..., None] * nodes
    kv = ((k[3][..., None] * tau + k[2][..., None]) * tau + k[1][..., None]) * tau + k[0][..., None]
    vals = fun(t[..., None] + shift_sign * tau)
    return (kv * vals * weights).sum(axis=-1) * xi


def _gaussian_params(sig):
    name = type(sig).__name__
    if name == "Zero":
        return 0.0, 1.0, 0.0
    if name == "GaussianSignal":
        return sig.amplitude, sig.a, sig.center
    return None


def example3_W(p: Example3Params, data, xi, t, allow_quadrature: bool = True) -> Bicomplex:
    """Apply the explicit kernels to the d'Alembert data.

    Gaussian and zero projections are integrated exactly through ``erf``;
    other callables use 200-point Gauss-Legendre quadrature when
    ``allow_quadrature`` is set.
    """
    xi, t = np.broadcast_arrays(np.asarray(xi, float), np.asarray(t, float))
    kf = kernel_coefficients(p, xi, "f")
    k1 = kernel_coefficients(p, xi, "1/f")
    images = {}
    for name, sig, sgn in (("p", data.plus, +1), ("m", data.minus, -1)):
        gp = _gaussian_params(sig)
        if gp is None and not allow_quadrature:
            raise OracleError(f"no closed form for {type(sig).__name__}; enable quadrature")
        base = np.asarray(sig(t + sgn * xi), dtype=complex)
        for which, k in (("f", kf), ("1/f", k1)):
            if gp is not None:
                extra = _gaussian_kernel_integral(k, gp[0], gp[1], gp[2], xi, sgn, t)
            else:
                extra = _quadrature_kernel_integral(k, sig, xi, sgn, t)
            images[name, which] = base + extra
    u = 0.5 * (images["p", "f"] + images["m", "f"])
    v = 0.5 * (images["p", "1/f"] - images["m", "1/f"])
    return Bicomplex(u, v)


def example3_reference(p: Example3Params, data, x, t, allow_quadrature: bool = True):
    """Reference ``(E, H)`` on the broadcast of ``x`` and ``t``."""
    x, t = np.broadcast_arrays(np.asarray(x, float), np.asarray(t, float))
    W = example3_W(p, data, p.xi(x), t, allow_quadrature)
    eps = p.eps(x)
    c = 1.0 / np.sqrt(eps * p.mu)
    return W.u / np.sqrt(c * eps), -1j * W.v / np.sqrt(c * p.mu)


# ------------------------------------------------------------ brute force


def characteristics_march(dlogf, w_plus, w_minus, xi_max: float, t_lo: float, t_hi: float,
                          step: float):
    """Integrate the Vekua system along characteristics (trapezoidal rule).

    With ``p = u + v`` and ``m = u - v`` the system becomes
    ``(d_xi - d_t) p = g m`` and ``(d_xi + d_t) m = g p`` with ``g = f'/f``.
    A square grid ``dt = dxi = step`` aligns both families of
    characteristics with grid diagonals. The scheme is second order with an
    even error expansion, so Richardson extrapolation applies.

    Returns
    -------
    xi, t : ndarray
        Grid vectors; ``t`` covers ``[t_lo, t_hi]``.
    W : Bicomplex
        Solution of shape ``(len(xi), len(t))``.
    """
    nxi = int(round(xi_max / step))
    if abs(nxi * step - xi_max) > 1e-9 * max(1.0, xi_max):
        raise OracleError("xi_max must be a multiple of step")
    nt = int(round((t_hi - t_lo) / step))
    if abs(nt * step - (t_hi - t_lo)) > 1e-9 * max(1.0, t_hi - t_lo):
        raise OracleError("t range must be a multiple of step")
    xi = step * np.arange(nxi + 1)
    tt = t_lo - xi_max + step * np.arange(nt + 2 * nxi + 1)
    g = dlogf(xi)
    P = np.empty((nxi + 1, nt + 1), complex)
    Mm = np.empty_like(P)
    p = np.asarray(w_plus(tt), complex)
    m = np.asarray(w_minus(tt), complex)
    P[0] = p[nxi:nxi + nt + 1]
    Mm[0] = m[nxi:nxi + nt + 1]
    hh = 0.5 * step
    for i in range(nxi):
        # row i covers tt[i : len - i]; row i+1 loses one node at each end
        a1 = p[2:] + hh * g[i] * m[2:]
        a2 = m[:-2] + hh * g[i] * p[:-2]
        b = hh * g[i + 1]
        p_new = (a1 + b * a2) / (1 - b * b)
        m_new = a2 + b * p_new
        p, m = p_new, m_new
        off = nxi - (i + 1)
        P[i + 1] = p[off:off + nt + 1]
        Mm[i + 1] = m[off:off + nt + 1]
    t = tt[nxi:nxi + nt + 1]
    return xi, t, Bicomplex.from_projections(P, Mm)


def characteristics_reference(dlogf, w_plus, w_minus, xi_max, t_lo, t_hi, step):
    """Richardson-extrapolated :func:`characteristics_march` on the ``step`` grid."""
    xi, t, Wc = characteristics_march(dlogf, w_plus, w_minus, xi_max, t_lo, t_hi, step)
    _, _, Wf = characteristics_march(dlogf, w_plus, w_minus, xi_max, t_lo, t_hi, step / 2)
    u = (4 * Wf.u[::2, ::2] - Wc.u) / 3
    v = (4 * Wf.v[::2, ::2] - Wc.v) / 3
    return xi, t, Bicomplex(u, v)


def constant_vekua_W(gamma: float, A: float, B: float, xi, t) -> Bicomplex:
    """Solution of ``d_zbar W + gamma bar W = 0`` with ``R(W) = e^{2 i gamma t}(A xi + B)``."""
    xi, t = np.broadcast_arrays(np.asarray(xi, float), np.asarray(t, float))
    e = np.exp(2j * gamma * t)
    lin = A * xi + B
    return Bicomplex(e * lin, -1j * e * (lin + A / (2 * gamma)))

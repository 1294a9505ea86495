"""Incident-field initial data at ``x = 0`` and their moment providers.

A *moment provider* is any object with

* ``provider(z)`` -- signal values,
* ``provider.moments(lmax, z1, z2)`` -- ``int_{z1}^{z2} z**l W(z) dz`` for
  ``l = 0..lmax``, shape ``(lmax + 1,) + broadcast(z1, z2).shape``,
* ``provider.domain`` -- ``(lo, hi)`` or ``None`` when defined on the whole line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import comb, erf, erfc

from .bicomplex import Bicomplex
from .quadrature import spline_cumulative, trig_moments_table


class SignalError(ValueError):
    pass


# ---------------------------------------------------------------- providers


@dataclass(frozen=True, eq=False)
class TrigSignal:
    """``sum_m amp[m] * exp(i * freq[m] * t)``, defined for every ``t``."""

    freqs: np.ndarray
    amps: np.ndarray
    domain: Optional[tuple] = None

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.tensordot(self.amps, np.exp(1j * np.multiply.outer(self.freqs, t)), axes=1)

    def moments(self, lmax, z1, z2):
        z1, z2 = np.broadcast_arrays(np.asarray(z1, float), np.asarray(z2, float))
        out = np.zeros((lmax + 1,) + z1.shape, dtype=complex)
        for w, g in zip(self.freqs, self.amps):
            c2, s2 = trig_moments_table(lmax, w, z2)
            c1, s1 = trig_moments_table(lmax, w, z1)
            out += g * ((c2 - c1) + 1j * (s2 - s1))
        return out


def gaussian_moments(a: float, lmax: int, z1, z2) -> np.ndarray:
    """``int_{z1}^{z2} z**l exp(-a z**2) dz`` for ``l = 0..lmax``.

    ``l = 0`` and ``l = 1`` are closed forms in ``erf`` and ``exp``; higher
    powers follow from

        I_l = [-z**(l-1) exp(-a z**2) / (2a)] + (l - 1)/(2a) I_{l-2}.

    The recurrence is run upward where it is stable
    (``l <= 2 a max(|z1|, |z2|)**2``) and downward from a high starting order
    elsewhere, so narrow intervals near the origin keep full relative accuracy.
    """
    if not a > 0:
        raise SignalError("Gaussian width parameter a must be positive")
    z1, z2 = np.broadcast_arrays(np.asarray(z1, float), np.asarray(z2, float))
    shape = z1.shape
    z1, z2 = z1.ravel(), z2.ravel()
    e1, e2 = np.exp(-a * z1 * z1), np.exp(-a * z2 * z2)
    ra = np.sqrt(a)

    def boundary(l):
        # [-z^(l-1) e^{-a z^2} / (2a)]_{z1}^{z2}
        return -(z2 ** (l - 1) * e2 - z1 ** (l - 1) * e1) / (2 * a)

    # upward chain
    up = np.empty((lmax + 1, z1.size))
    lo, hi = ra * z1, ra * z2
    erf_diff = np.where(lo >= 0, erfc(lo) - erfc(hi),
                        np.where(hi <= 0, erfc(-hi) - erfc(-lo), erf(hi) - erf(lo)))
    up[0] = np.sqrt(np.pi) / (2 * ra) * erf_diff
    if lmax >= 1:
        up[1] = (e1 - e2) / (2 * a)
    for l in range(2, lmax + 1):
        up[l] = boundary(l) + (l - 1) / (2 * a) * up[l - 2]

    # downward chains (one per parity) only where the upward pass is unstable;
    # the zero start guess is damped away long before l <= lmax
    thresh = 2 * a * np.maximum(z1 * z1, z2 * z2)
    need = np.flatnonzero(thresh < lmax)
    out = up
    if need.size:
        w1, w2, f1, f2 = z1[need], z2[need], e1[need], e2[need]
        top = lmax + 120
        down = np.empty((lmax + 1, need.size))
        with np.errstate(over="ignore", invalid="ignore"):
            for start in (top, top + 1):
                cur = np.zeros(need.size)
                for l in range(start, 1, -2):
                    bnd = -(w2 ** (l - 1) * f2 - w1 ** (l - 1) * f1) / (2 * a)
                    cur = (cur - bnd) * (2 * a) / (l - 1)   # I_{l-2}
                    if l - 2 <= lmax:
                        down[l - 2] = cur
        use_up = np.arange(lmax + 1)[:, None] <= thresh[need][None, :]
        out[:, need] = np.where(use_up, up[:, need], down)
    return out.reshape((lmax + 1,) + shape)


@dataclass(frozen=True, eq=False)
class GaussianSignal:
    """``amplitude * exp(-a (t - center)**2)`` on the whole line."""

    a: float = 4.0
    amplitude: complex = 1.0
    center: float = 0.0
    domain: Optional[tuple] = None

    def __post_init__(self):
        if not self.a > 0:
            raise SignalError("Gaussian width parameter a must be positive")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.amplitude * np.exp(-self.a * (t - self.center) ** 2) + 0j

    def moments(self, lmax, z1, z2):
        if self.center == 0.0:
            return self.amplitude * gaussian_moments(self.a, lmax, z1, z2)
        # expand z**l = sum_j C(l,j) center**(l-j) (z - center)**j
        z1, z2 = np.broadcast_arrays(np.asarray(z1, float), np.asarray(z2, float))
        g = gaussian_moments(self.a, lmax, z1 - self.center, z2 - self.center)
        out = np.zeros((lmax + 1,) + z1.shape, dtype=complex)
        for l in range(lmax + 1):
            for j in range(l + 1):
                out[l] += comb(l, j, exact=True) * self.center ** (l - j) * g[j]
        return self.amplitude * out


@dataclass(frozen=True, eq=False)
class PSKSignal:
    """Symbol stream ``sum_n [c_n cos(w0 t) + s_n sin(w0 t)] 1_[t0 + nT, t0 + (n+1)T)(t)``.

    ``duration`` is the length ``T`` of one symbol. The stream is zero outside
    its support, so moments are defined for any interval.
    """

    c: np.ndarray
    s: np.ndarray
    omega0: float
    duration: float
    t0: float = 0.0
    domain: Optional[tuple] = None

    def __post_init__(self):
        if len(self.c) != len(self.s):
            raise SignalError("symbol arrays c and s must have equal length")
        if not self.duration > 0:
            raise SignalError("symbol duration must be positive")

    @property
    def support(self):
        return self.t0, self.t0 + len(self.c) * self.duration

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        n = np.floor((t - self.t0) / self.duration).astype(int)
        inside = (n >= 0) & (n < len(self.c))
        nn = np.clip(n, 0, len(self.c) - 1)
        c, s = np.asarray(self.c)[nn], np.asarray(self.s)[nn]
        val = c * np.cos(self.omega0 * t) + s * np.sin(self.omega0 * t)
        return np.where(inside, val, 0.0) + 0j

    def moments(self, lmax, z1, z2):
        z1, z2 = np.broadcast_arrays(np.asarray(z1, float), np.asarray(z2, float))
        out = np.zeros((lmax + 1,) + z1.shape, dtype=complex)
        for n, (cn, sn) in enumerate(zip(self.c, self.s)):
            a = self.t0 + n * self.duration
            b = a + self.duration
            lo, hi = np.clip(z1, a, b), np.clip(z2, a, b)
            if not np.any(hi != lo):
                continue
            chi, shi = trig_moments_table(lmax, self.omega0, hi)
            clo, slo = trig_moments_table(lmax, self.omega0, lo)
            out += cn * (chi - clo) + sn * (shi - slo)
        return out


def psk_moments(c, s, omega0, duration, lmax, z1, z2, t0: float = 0.0):
    return PSKSignal(np.asarray(c, float), np.asarray(s, float), omega0, duration, t0).moments(lmax, z1, z2)


class SampledSignal:
    """Signal known through samples; moments integrate splines of ``z**l W(z)``."""

    def __init__(self, t, values):
        t = np.asarray(t, dtype=float)
        values = np.asarray(values, dtype=complex)
        if t.ndim != 1 or t.shape != values.shape:
            raise SignalError("sample times and values must be 1-D of equal length")
        if t.size < 4 or np.any(np.diff(t) <= 0):
            raise SignalError("need at least 4 strictly increasing sample times")
        self.t = t
        self.values = values
        self.domain = (float(t[0]), float(t[-1]))
        self._interp = CubicSpline(t, values)
        self._anti = {}

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        self._check(z, z)
        return self._interp(z)

    def _check(self, z1, z2):
        lo, hi = self.domain
        tol = 1e-12 * max(1.0, abs(lo), abs(hi))
        if np.any(np.asarray(z1) < lo - tol) or np.any(np.asarray(z2) > hi + tol):
            raise SignalError(f"query outside the sampled range [{lo}, {hi}]")

    def _antiderivative(self, l):
        if l not in self._anti:
            self._anti[l] = spline_cumulative(self.t ** l * self.values, self.t)
        return self._anti[l]

    def moments(self, lmax, z1, z2):
        z1, z2 = np.broadcast_arrays(np.asarray(z1, float), np.asarray(z2, float))
        self._check(z1, z2)
        out = np.empty((lmax + 1,) + z1.shape, dtype=complex)
        for l in range(lmax + 1):
            F = self._antiderivative(l)
            out[l] = F(z2) - F(z1)
        return out


def sampled_moments(samples, mesh, lmax, z1, z2):
    return SampledSignal(mesh, samples).moments(lmax, z1, z2)


class LinearCombination:
    """``sum_i w_i * provider_i``; its domain is the intersection of the parts."""

    def __init__(self, terms: Sequence[tuple]):
        self.terms = [(complex(w), p) for w, p in terms if w != 0]
        lo, hi = -np.inf, np.inf
        for _, p in self.terms:
            dom = getattr(p, "domain", None)
            if dom is not None:
                lo, hi = max(lo, dom[0]), min(hi, dom[1])
        self.domain = None if (lo == -np.inf and hi == np.inf) else (lo, hi)

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        out = np.zeros(z.shape, dtype=complex)
        for w, p in self.terms:
            out = out + w * p(z)
        return out

    def moments(self, lmax, z1, z2):
        z1, z2 = np.broadcast_arrays(np.asarray(z1, float), np.asarray(z2, float))
        out = np.zeros((lmax + 1,) + z1.shape, dtype=complex)
        for w, p in self.terms:
            out = out + w * p.moments(lmax, z1, z2)
        return out


class Zero:
    domain = None

    def __call__(self, z):
        return np.zeros(np.shape(z), dtype=complex)

    def moments(self, lmax, z1, z2):
        return np.zeros((lmax + 1,) + np.broadcast(np.asarray(z1), np.asarray(z2)).shape, dtype=complex)


# ---------------------------------------------------------------- initial data


def _interface_factors(profile):
    c0, eps0, mu = profile.c0, profile.eps0, profile.mu
    return np.sqrt(c0 * eps0), np.sqrt(c0 * mu)


@dataclass(frozen=True, eq=False)
class TrigInitialData:
    """Trigonometric initial data ``W0(t) = sum_m gamma_m exp(i w_m t)``.

    ``freqs`` are the frequencies ``w_m = omega0 + m*omega``; ``alpha``/``beta``
    are the coefficients of ``E0``/``H0`` and ``gamma_p``/``gamma_m`` the
    projections ``R(gamma) +- I(gamma)``.
    """

    freqs: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    gamma_p: np.ndarray
    gamma_m: np.ndarray
    omega0: float = 0.0
    omega: float = 0.0
    M: int = 0

    @property
    def gamma(self) -> Bicomplex:
        return Bicomplex.from_projections(self.gamma_p, self.gamma_m)

    @property
    def plus(self) -> TrigSignal:
        return TrigSignal(self.freqs, self.gamma_p)

    @property
    def minus(self) -> TrigSignal:
        return TrigSignal(self.freqs, self.gamma_m)

    def W0(self, t) -> Bicomplex:
        t = np.asarray(t, dtype=float)
        e = np.exp(1j * np.multiply.outer(t, self.freqs))
        g = self.gamma
        return Bicomplex(e @ g.u, e @ g.v)

    def E0(self, t):
        return np.exp(1j * np.multiply.outer(np.asarray(t, float), self.freqs)) @ self.alpha

    def H0(self, t):
        return np.exp(1j * np.multiply.outer(np.asarray(t, float), self.freqs)) @ self.beta

    def as_general(self) -> "GeneralInitialData":
        return GeneralInitialData(self.plus, self.minus)

    @classmethod
    def from_gamma(cls, freqs, gamma_p, gamma_m, profile, omega0=0.0, omega=0.0, M=0):
        """Build from the projections ``gamma_m^+-`` directly."""
        gp = np.atleast_1d(np.asarray(gamma_p, dtype=complex))
        gm = np.atleast_1d(np.asarray(gamma_m, dtype=complex))
        se, sm = _interface_factors(profile)
        alpha = (gp + gm) / (2 * se)
        beta = (gp - gm) / (2j * sm)
        return cls(np.atleast_1d(np.asarray(freqs, float)), alpha, beta, gp, gm, omega0, omega, M)


def from_EH_trig(alpha, beta, profile, omega0: float, omega: float = 0.0) -> TrigInitialData:
    """Data for ``E0 = sum alpha_m e^{i(w0 + m w)t}``, ``H0 = sum beta_m e^{...}``.

    ``alpha`` and ``beta`` have length ``2M + 1`` and are indexed ``m = -M..M``.
    """
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    beta = np.atleast_1d(np.asarray(beta, dtype=complex))
    if alpha.shape != beta.shape or alpha.size % 2 == 0:
        raise SignalError("alpha and beta must both have odd length 2M + 1")
    M = (alpha.size - 1) // 2
    freqs = omega0 + omega * np.arange(-M, M + 1)
    se, sm = _interface_factors(profile)
    gp = se * alpha + 1j * sm * beta
    gm = se * alpha - 1j * sm * beta
    return TrigInitialData(freqs, alpha, beta, gp, gm, float(omega0), float(omega), M)


@dataclass(frozen=True, eq=False)
class GeneralInitialData:
    """Initial data given through the projections ``W0^+`` and ``W0^-``."""

    plus: object = field(default_factory=Zero)
    minus: object = field(default_factory=Zero)

    def W0(self, t) -> Bicomplex:
        return Bicomplex.from_projections(self.plus(t), self.minus(t))

    @property
    def domain(self):
        lo, hi = -np.inf, np.inf
        for p in (self.plus, self.minus):
            dom = getattr(p, "domain", None)
            if dom is not None:
                lo, hi = max(lo, dom[0]), min(hi, dom[1])
        return None if (lo == -np.inf and hi == np.inf) else (lo, hi)


def from_EH_general(E0, H0, profile) -> GeneralInitialData:
    """Combine providers for ``E0`` and ``H0`` into ``W0^+-``."""
    se, sm = _interface_factors(profile)
    return GeneralInitialData(LinearCombination([(se, E0), (1j * sm, H0)]),
                              LinearCombination([(se, E0), (-1j * sm, H0)]))


def load_symbols(path):
    """Two-column text ``c_n s_n`` -> arrays ``(c, s)``."""
    data = np.loadtxt(path, ndmin=2, comments="#", delimiter=None)
    if data.shape[1] != 2:
        raise SignalError(f"{path}: expected two columns (c_n, s_n)")
    return data[:, 0], data[:, 1]


def load_sampled(path) -> SampledSignal:
    """Two- or three-column text ``t Re [Im]`` -> :class:`SampledSignal`.

    Columns may be separated by whitespace or commas.
    """
    with open(path) as fh:
        try:
            data = np.loadtxt((ln.replace(",", " ") for ln in fh), ndmin=2, comments="#")
        except ValueError as exc:
            raise SignalError(f"{path}: {exc}") from None
    if data.shape[1] not in (2, 3):
        raise SignalError(f"{path}: expected columns t, Re[, Im]")
    values = data[:, 1] + (1j * data[:, 2] if data.shape[1] == 3 else 0)
    return SampledSignal(data[:, 0], values)

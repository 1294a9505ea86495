"""Cumulative quadrature on uniform meshes and closed-form trigonometric moments."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.interpolate import CubicSpline

PANEL = 5  # intervals per Newton-Cotes panel (6 nodes)


class MeshError(ValueError):
    """Raised when a mesh does not satisfy the composite-rule requirements."""


@dataclass(frozen=True)
class UniformMesh:
    """Uniform mesh ``start + k*step``, ``k = 0..count-1``.

    ``count`` must be of the form ``5*m + 1`` so that the mesh splits into
    whole six-point panels.
    """

    start: float
    step: float
    count: int

    def __post_init__(self):
        check_count(self.count)
        if not self.step > 0:
            raise MeshError(f"mesh step must be positive, got {self.step}")

    @classmethod
    def over(cls, a: float, b: float, count: int) -> "UniformMesh":
        check_count(count)
        return cls(float(a), (float(b) - float(a)) / (count - 1), int(count))

    @property
    def points(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)

    @property
    def stop(self) -> float:
        return self.start + self.step * (self.count - 1)


def check_count(count: int) -> None:
    if count < PANEL + 1:
        raise MeshError(f"mesh needs at least {PANEL + 1} points, got {count}")
    if (count - 1) % PANEL:
        raise MeshError(
            f"mesh count must satisfy count % {PANEL} == 1 for the six-point rule, got {count}")


def _lagrange_partial_weights() -> np.ndarray:
    """Weights ``w[j, i] = int_0^{j+1} L_i(s) ds`` for Lagrange basis on nodes 0..5."""
    nodes = range(PANEL + 1)
    w = np.zeros((PANEL, PANEL + 1))
    for i in nodes:
        # coefficients of prod_{m != i} (s - m) / (i - m), lowest degree first
        coeffs = [Fraction(1)]
        for m in nodes:
            if m == i:
                continue
            denom = Fraction(i - m)
            new = [Fraction(0)] * (len(coeffs) + 1)
            for d, c in enumerate(coeffs):
                new[d + 1] += c / denom
                new[d] -= c * m / denom
            coeffs = new
        for j in range(1, PANEL + 1):
            w[j - 1, i] = float(sum(c * Fraction(j) ** (d + 1) / (d + 1)
                                    for d, c in enumerate(coeffs)))
    return w


_NC6_WEIGHTS = _lagrange_partial_weights()


def nc6_cumulative(samples, step: float) -> np.ndarray:
    """Cumulative integral from the first node to every node (six-point rule).

    The mesh is split into panels of six nodes. Inside each panel every node
    receives the integral of the panel's degree-5 interpolant from the panel
    start, so the rule is exact for polynomials of degree <= 5 at every node.

    Parameters
    ----------
    samples : array_like
        Integrand values; integration runs along the last axis. Real or complex.
    step : float
        Mesh spacing.

    Returns
    -------
    ndarray
        Same shape as ``samples`` with ``result[..., 0] == 0``.
    """
    y = np.asarray(samples)
    n = y.shape[-1]
    check_count(n)
    m = (n - 1) // PANEL
    idx = PANEL * np.arange(m)[:, None] + np.arange(PANEL + 1)[None, :]
    panels = y[..., idx]  # (..., m, 6)
    inc = step * np.einsum("...pi,ji->...pj", panels, _NC6_WEIGHTS)  # (..., m, 5)
    offsets = np.cumsum(inc[..., :, -1], axis=-1)
    offsets = np.concatenate([np.zeros_like(offsets[..., :1]), offsets[..., :-1]], axis=-1)
    out = np.zeros(y.shape, dtype=np.result_type(y.dtype, float))
    out[..., 1:] = (inc + offsets[..., None]).reshape(y.shape[:-1] + (m * PANEL,))
    return out


def spline_cumulative(samples, mesh):
    """Antiderivative of the cubic spline through ``(mesh, samples)``.

    Returns a callable ``F`` with ``F(mesh[0]) == 0``; ``F(b) - F(a)`` is the
    exact integral of the interpolating (not-a-knot) spline over ``[a, b]``.
    Querying outside the data range raises ``ValueError``.
    """
    x = np.asarray(mesh, dtype=float)
    y = np.asarray(samples)
    if x.ndim != 1 or x.size < 4:
        raise MeshError("spline integration needs at least 4 abscissae")
    if np.any(np.diff(x) <= 0):
        raise MeshError("spline abscissae must be strictly increasing")
    anti = CubicSpline(x, y, axis=-1 if y.ndim > 1 else 0).antiderivative()
    lo, hi = x[0], x[-1]
    span = hi - lo

    def integral(z):
        z = np.asarray(z, dtype=float)
        if np.any(z < lo - 1e-12 * span) or np.any(z > hi + 1e-12 * span):
            raise ValueError(f"query outside spline range [{lo}, {hi}]")
        return anti(np.clip(z, lo, hi))

    return integral


def power_exp_moments(kmax: int, z) -> np.ndarray:
    """``J_k(z) = int_0^1 s^k exp(i z s) ds`` for ``k = 0..kmax``.

    Uses the recurrence ``J_k = (e^{iz} - k J_{k-1}) / (iz)`` upward where it
    is stable (``k <= |z|``) and Miller's downward recurrence
    ``J_{k-1} = (e^{iz} - iz J_k) / k`` for ``k > |z|``.

    Parameters
    ----------
    kmax : int
        Highest power.
    z : array_like of float
        Real arguments.

    Returns
    -------
    ndarray of complex, shape ``(kmax + 1,) + z.shape``
    """
    z = np.asarray(z, dtype=float)
    shape = z.shape
    z = z.ravel()
    az = np.abs(z)
    ez = np.exp(1j * z)
    iz = 1j * z
    out = np.empty((kmax + 1, z.size), dtype=complex)

    # downward branch; starting guess J = 0 is damped by the factors |z|/k
    top = kmax + 60 + 2 * int(np.ceil(az.max(initial=0.0)))
    jk = np.zeros(z.size, dtype=complex)
    with np.errstate(over="ignore", invalid="ignore"):
        # entries with k < |z| may blow up here; the upward pass overwrites them
        for k in range(top, 0, -1):
            jk = (ez - iz * jk) / k          # now J_{k-1}
            if k - 1 <= kmax:
                out[k - 1] = jk

    up = np.flatnonzero(az >= 1.0)
    if up.size:
        ezu, izu, azu = ez[up], iz[up], az[up]
        cur = (ezu - 1.0) / izu
        for k in range(kmax + 1):
            if k > 0:
                cur = (ezu - k * cur) / izu
            use = k <= azu
            out[k, up[use]] = cur[use]
    return out.reshape((kmax + 1,) + shape)


def trig_moments(k: int, omega, xi):
    """Return ``(int_0^xi t^k cos(omega t) dt, int_0^xi t^k sin(omega t) dt)``.

    Works for scalar or array ``omega``/``xi`` (broadcast together) and any
    real sign of ``xi``.
    """
    c, s = trig_moments_table(k, omega, xi)
    return c[k], s[k]


def trig_moments_table(kmax: int, omega, xi):
    """Cosine and sine moments for every power ``0..kmax``.

    Returns two real arrays of shape ``(kmax + 1,) + broadcast(omega, xi).shape``.
    """
    omega, xi = np.broadcast_arrays(np.asarray(omega, float), np.asarray(xi, float))
    jk = power_exp_moments(kmax, omega * xi)
    scale = xi[None, ...] ** (np.arange(kmax + 1).reshape((-1,) + (1,) * xi.ndim) + 1)
    full = scale * jk
    return full.real, full.imag

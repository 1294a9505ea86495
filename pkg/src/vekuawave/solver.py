"""Space-time assembly of the transmitted field.

The Vekua solution is ``W = 1/2 T_f[W0+(t+xi) + W0-(t-xi)]
+ j/2 T_{1/f}[W0+(t+xi) - W0-(t-xi)]``; physical fields follow from
``W = sqrt(c) (sqrt(eps) E + i j sqrt(mu) H)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bicomplex import Bicomplex
from .medium import MediumProfile
from .signals import GeneralInitialData, TrigInitialData
from .transmutation import (DomainError, Transmutation, TransmutationCoeffs)


class GridError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GridSpec:
    """Output grid: ``x`` values must be nodes of the medium mesh, ``t`` uniform."""

    x: np.ndarray
    t: np.ndarray

    @classmethod
    def regular(cls, profile: MediumProfile, nx: int, t_start: float, t_stop: float, nt: int,
                x_stop: Optional[float] = None) -> "GridSpec":
        """``nx`` equally spaced mesh nodes on ``[0, x_stop]`` and ``nt`` times."""
        x_stop = profile.mesh.stop if x_stop is None else x_stop
        last = int(round(x_stop / profile.mesh.step))
        if (last % (nx - 1)) != 0:
            raise GridError(f"{nx} x-points do not fall on the {profile.n}-node medium mesh")
        idx = np.arange(0, last + 1, last // (nx - 1))
        return cls(profile.x[idx], np.linspace(t_start, t_stop, nt))


@dataclass(eq=False)
class FieldGrid:
    """Solution on a grid; arrays are indexed ``[ix, it]``."""

    x: np.ndarray
    t: np.ndarray
    xi: np.ndarray
    W: Bicomplex
    E: np.ndarray
    H: np.ndarray
    method: str = "full"
    N: int = 0
    meta: dict = field(default_factory=dict)


def dalembert(w_plus, w_minus, xi, t) -> Bicomplex:
    """Solution ``P+ w0+(t + xi) + P- w0-(t - xi)`` of the hyperbolic Cauchy-Riemann system."""
    xi = np.asarray(xi, dtype=float)
    t = np.asarray(t, dtype=float)
    for fun, z in ((w_plus, t + xi), (w_minus, t - xi)):
        dom = getattr(fun, "domain", None)
        if dom is not None and (np.any(z < dom[0]) or np.any(z > dom[1])):
            raise DomainError(f"t +- xi leaves the initial-data domain {dom}")
    return Bicomplex.from_projections(w_plus(t + xi), w_minus(t - xi))


def _nodes(profile, grid):
    if np.any(np.diff(grid.t) <= 0):
        raise GridError("t values must be strictly increasing")
    return profile.node_index(grid.x)


def to_fields(W: Bicomplex, profile: MediumProfile, nodes):
    """``E = R(W) / sqrt(c eps)`` and ``H = -i I(W) / sqrt(c mu)`` at the given nodes."""
    nodes = np.asarray(nodes)
    c, eps = profile.c[nodes], profile.eps[nodes]
    se = np.sqrt(c * eps)
    sm = np.sqrt(c * profile.mu)
    shape = (-1,) + (1,) * (np.ndim(W.u) - 1)
    return W.u / se.reshape(shape), -1j * W.v / sm.reshape(shape)


def from_fields(E, H, profile: MediumProfile, nodes) -> Bicomplex:
    """Inverse of :func:`to_fields`."""
    nodes = np.asarray(nodes)
    c, eps = profile.c[nodes], profile.eps[nodes]
    shape = (-1,) + (1,) * (np.ndim(E) - 1)
    se = np.sqrt(c * eps).reshape(shape)
    sm = np.sqrt(c * profile.mu).reshape(shape)
    return Bicomplex(se * E, 1j * sm * H)


def _check_fit_range(coeffs: TransmutationCoeffs, profile, nodes):
    if profile.xi[nodes].max() > coeffs.xi_max * (1 + 1e-12):
        raise GridError("grid reaches beyond the interval the coefficients were fitted on")


def _package(W, profile, grid, nodes, method, N, **meta) -> FieldGrid:
    E, H = to_fields(W, profile, nodes)
    return FieldGrid(x=np.asarray(grid.x, float), t=np.asarray(grid.t, float),
                     xi=profile.xi[nodes], W=W, E=E, H=H, method=method, N=N, meta=meta)


def _trig_W(data: TrigInitialData, ops: Transmutation, nodes, t) -> Bicomplex:
    w = data.freqs
    Tf_p = ops.exp_image(w, +1, nodes, "f")       # (M, nx)
    Tf_m = ops.exp_image(w, -1, nodes, "f")
    T1_p = ops.exp_image(w, +1, nodes, "1/f")
    T1_m = ops.exp_image(w, -1, nodes, "1/f")
    phase = np.exp(1j * np.multiply.outer(w, t))   # (M, nt)
    gp = data.gamma_p[:, None]
    gm = data.gamma_m[:, None]
    u = 0.5 * np.einsum("mx,mt->xt", gp * Tf_p + gm * Tf_m, phase)
    v = 0.5 * np.einsum("mx,mt->xt", gp * T1_p - gm * T1_m, phase)
    return Bicomplex(u, v)


def solve_trig(data: TrigInitialData, coeffs: TransmutationCoeffs, powers, profile: MediumProfile,
               grid: GridSpec, ops: Optional[Transmutation] = None) -> FieldGrid:
    """Field for trigonometric initial data, one operator image per frequency.

    Cost is O(N^2) per x-node for the kernel tables plus O(N M) per node for
    the ``M`` frequencies.
    """
    nodes = _nodes(profile, grid)
    _check_fit_range(coeffs, profile, nodes)
    ops = ops or Transmutation(coeffs, powers)
    W = _trig_W(data, ops, nodes, np.asarray(grid.t, float))
    return _package(W, profile, grid, nodes, "full", coeffs.N)


def _check_dependence(data: GeneralInitialData, profile, grid, nodes):
    dom = data.domain
    if dom is None:
        return
    lo, hi = dom
    xi = profile.xi[nodes]
    t = np.asarray(grid.t, float)
    tol = 1e-12 * max(1.0, abs(lo), abs(hi))
    bad = ((t[None, :] - xi[:, None]) < lo - tol) | ((t[None, :] + xi[:, None]) > hi + tol)
    if np.any(bad):
        ix, it = np.argwhere(bad)[0]
        raise DomainError(
            f"domain of dependence violated at x={grid.x[ix]:.6g}, t={t[it]:.6g}: "
            f"[t - xi, t + xi] = [{t[it] - xi[ix]:.6g}, {t[it] + xi[ix]:.6g}] is not inside "
            f"the initial-data interval [{lo:.6g}, {hi:.6g}]")


def _general_W(data: GeneralInitialData, ops: Transmutation, profile, nodes, t) -> Bicomplex:
    xi = profile.xi[nodes][:, None]
    tt = t[None, :]
    z1, z2 = tt - xi, tt + xi
    node_grid = nodes[:, None]
    parts = {}
    for name, prov, branch in (("p", data.plus, "+"), ("m", data.minus, "-")):
        moments = prov.moments(ops.N, z1, z2)
        for which in ("f", "1/f"):
            parts[name, which] = ops.general_image(prov, tt, node_grid, branch, which, moments=moments)
    u = 0.5 * (parts["p", "f"] + parts["m", "f"])
    v = 0.5 * (parts["p", "1/f"] - parts["m", "1/f"])
    return Bicomplex(u, v)


def solve_general(data: GeneralInitialData, coeffs: TransmutationCoeffs, powers,
                  profile: MediumProfile, grid: GridSpec,
                  ops: Optional[Transmutation] = None) -> FieldGrid:
    """Field for initial data known through moment providers."""
    nodes = _nodes(profile, grid)
    _check_fit_range(coeffs, profile, nodes)
    _check_dependence(data, profile, grid, nodes)
    ops = ops or Transmutation(coeffs, powers)
    W = _general_W(data, ops, profile, nodes, np.asarray(grid.t, float))
    return _package(W, profile, grid, nodes, "full", coeffs.N)


def single_wave(data, profile: MediumProfile, grid: GridSpec) -> FieldGrid:
    """Replace both transmutation operators by the identity."""
    nodes = _nodes(profile, grid)
    t = np.asarray(grid.t, float)
    xi = profile.xi[nodes][:, None]
    if isinstance(data, TrigInitialData):
        data = data.as_general()
    else:
        _check_dependence(data, profile, grid, nodes)
    W = dalembert(data.plus, data.minus, xi, t[None, :])
    return _package(W, profile, grid, nodes, "single-wave", 0)


def solve(data, coeffs, powers, profile, grid, single: bool = False) -> FieldGrid:
    """Dispatch on the data type."""
    if single:
        return single_wave(data, profile, grid)
    if isinstance(data, TrigInitialData):
        return solve_trig(data, coeffs, powers, profile, grid)
    return solve_general(data, coeffs, powers, profile, grid)


def _interior(a):
    return a[1:-1, 1:-1]


def vekua_residual(W: Bicomplex, xi, t, dlogf) -> float:
    """Max-norm residual of ``d_zbar W - (f'/2f) bar W = 0``.

    Component form: ``(u_xi - v_t)/2 - (f'/2f) u`` and
    ``(v_xi - u_t)/2 + (f'/2f) v``. Centred differences, second order also
    on the non-uniform ``xi`` values; boundary rows are excluded.
    """
    xi = np.asarray(xi, float)
    t = np.asarray(t, float)
    if xi.size < 3 or t.size < 3:
        raise GridError("need at least 3x3 grid points for centred differences")
    u, v = np.asarray(W.u), np.asarray(W.v)
    g = 0.5 * np.asarray(dlogf, float)[:, None]
    u_xi, u_t = np.gradient(u, xi, t)
    v_xi, v_t = np.gradient(v, xi, t)
    r1 = 0.5 * (u_xi - v_t) - g * u
    r2 = 0.5 * (v_xi - u_t) + g * v
    return float(max(np.abs(_interior(r1)).max(), np.abs(_interior(r2)).max()))


def maxwell_residual(E, H, x, t, eps, mu: float) -> float:
    """Max-norm residual of ``eps E_t = i H_x`` and ``i E_x = -mu H_t``."""
    x = np.asarray(x, float)
    t = np.asarray(t, float)
    if x.size < 3 or t.size < 3:
        raise GridError("need at least 3x3 grid points for centred differences")
    E_x, E_t = np.gradient(np.asarray(E), x, t)
    H_x, H_t = np.gradient(np.asarray(H), x, t)
    eps = np.asarray(eps, float)[:, None]
    r1 = eps * E_t - 1j * H_x
    r2 = 1j * E_x + mu * H_t
    return float(max(np.abs(_interior(r1)).max(), np.abs(_interior(r2)).max()))


def grid_residuals(fg: FieldGrid, profile: MediumProfile):
    """``(vekua, maxwell)`` residuals of a solved grid."""
    nodes = profile.node_index(fg.x)
    rv = vekua_residual(fg.W, fg.xi, fg.t, profile.dlogf[nodes])
    rm = maxwell_residual(fg.E, fg.H, fg.x, fg.t, profile.eps[nodes], profile.mu)
    return rv, rm

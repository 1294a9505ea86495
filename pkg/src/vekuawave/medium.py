"""Layer description: permittivity samples, travel-time coordinate and potential.

Everything is sampled on a uniform mesh in the physical coordinate ``x``.
The travel-time coordinate ``xi(x) = sqrt(mu) * int_0^x sqrt(eps)`` is
non-uniform on that mesh, so integrals in ``xi`` are always rewritten as
integrals in ``x`` with the weight ``sqrt(mu * eps)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator

from .quadrature import MeshError, UniformMesh, check_count, nc6_cumulative


class MediumError(ValueError):
    pass


@dataclass(frozen=True)
class PowerLaw:
    """Permittivity ``eps(x) = (alpha*x + beta)**p`` with exact derivatives."""

    alpha: float
    beta: float
    p: float

    def __call__(self, x):
        return self.derivatives(x)[0]

    def derivatives(self, x):
        s = self.alpha * np.asarray(x, dtype=float) + self.beta
        if np.any(s <= 0):
            raise MediumError("alpha*x + beta must stay positive on the layer")
        a, p = self.alpha, self.p
        eps = s ** p
        return eps, a * p * s ** (p - 1), a * a * p * (p - 1) * s ** (p - 2)


@dataclass(frozen=True)
class Constant:
    """Homogeneous medium."""

    value: float

    def __call__(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.value)

    def derivatives(self, x):
        e = self(x)
        return e, np.zeros_like(e), np.zeros_like(e)


@dataclass(frozen=True, eq=False)
class MediumProfile:
    """Sampled layer with every derived quantity the solver needs.

    Attributes
    ----------
    mesh : UniformMesh
        Mesh in ``x`` over ``[0, x_max]``.
    eps, eps1, eps2 : ndarray
        Permittivity and its first two ``x``-derivatives at the nodes
        (``eps1``/``eps2`` are None for tabulated media without derivatives).
    mu : float
        Constant permeability.
    xi : ndarray
        Travel-time coordinate at the nodes.
    f : ndarray
        ``(eps / eps(0))**(1/4)``, normalised so that ``f[0] == 1``.
    dlogf : ndarray
        ``f'(xi) / f(xi)`` at the nodes.
    q : ndarray
        Potential ``f''(xi) / f(xi)``.
    h : float
        ``f'(0) / f(0)``.
    """

    mesh: UniformMesh
    eps: np.ndarray
    eps1: Optional[np.ndarray]
    eps2: Optional[np.ndarray]
    mu: float
    xi: np.ndarray
    f: np.ndarray
    dlogf: np.ndarray
    q: np.ndarray
    h: float
    _x_of_xi: Callable = field(repr=False, default=None)

    @property
    def x(self) -> np.ndarray:
        return self.mesh.points

    @property
    def n(self) -> int:
        return self.mesh.count

    @property
    def xi_max(self) -> float:
        return float(self.xi[-1])

    @property
    def weight(self) -> np.ndarray:
        """``dxi/dx = sqrt(mu * eps)``."""
        return np.sqrt(self.mu * self.eps)

    @property
    def c(self) -> np.ndarray:
        """Wave speed ``1 / sqrt(eps * mu)``."""
        return 1.0 / np.sqrt(self.eps * self.mu)

    @property
    def eps0(self) -> float:
        return float(self.eps[0])

    @property
    def c0(self) -> float:
        return float(self.c[0])

    def x_of_xi(self, xi):
        """Inverse of the travel-time map (monotone cubic interpolation)."""
        return self._x_of_xi(xi)

    def node_index(self, x, tol: float = 1e-9) -> np.ndarray:
        """Indices of mesh nodes coinciding with the abscissae ``x``."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        k = np.rint((x - self.mesh.start) / self.mesh.step).astype(int)
        if np.any(k < 0) or np.any(k >= self.n) or np.any(
                np.abs(self.x[np.clip(k, 0, self.n - 1)] - x) > tol * max(1.0, self.mesh.stop)):
            raise MediumError("requested x values are not nodes of the medium mesh")
        return k

    def integrate_in_xi(self, g) -> np.ndarray:
        return integrate_in_xi(g, self)


def _one_sided_derivative(y: np.ndarray, step: float) -> float:
    # fourth-order forward difference at the first node
    c = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
    return float(c @ y[:5]) / step


def build_profile(eps, mu: float = 1.0, x_max: float = 1.0, n_points: int = 5001,
                  eps1=None, eps2=None, fd_fallback: bool = True) -> MediumProfile:
    """Sample a permittivity and derive the travel-time description of the layer.

    Parameters
    ----------
    eps : callable or array_like
        Either an object with a ``derivatives(x) -> (eps, eps', eps'')``
        method (``PowerLaw``, ``Constant``), a plain callable ``eps(x)``, or an
        array of samples on the uniform mesh over ``[0, x_max]``.
    mu : float
        Constant permeability.
    x_max : float
        Layer thickness.
    n_points : int
        Number of mesh nodes; must satisfy ``n_points % 5 == 1``.
    eps1, eps2 : callable or array_like, optional
        First and second derivatives of ``eps``. When missing, the potential
        is obtained from finite differences of ``f`` (if ``fd_fallback``).
    """
    if not mu > 0:
        raise MediumError("permeability must be positive")
    if isinstance(eps, (np.ndarray, list, tuple)):
        n_points = len(eps)
    check_count(n_points)
    mesh = UniformMesh.over(0.0, x_max, n_points)
    x = mesh.points

    def sample(obj):
        if obj is None:
            return None
        if callable(obj):
            return np.asarray(obj(x), dtype=float)
        arr = np.asarray(obj, dtype=float)
        if arr.shape != x.shape:
            raise MediumError(f"sampled array has length {arr.size}, mesh has {x.size}")
        return arr

    if hasattr(eps, "derivatives") and eps1 is None and eps2 is None:
        e, e1, e2 = (np.asarray(a, dtype=float) for a in eps.derivatives(x))
    else:
        e, e1, e2 = sample(eps), sample(eps1), sample(eps2)
    if not np.all(np.isfinite(e)) or np.any(e <= 0):
        raise MediumError("permittivity must be finite and positive on the layer")

    weight = np.sqrt(mu * e)
    xi = nc6_cumulative(weight, mesh.step)
    f = (e / e[0]) ** 0.25

    if e1 is not None:
        dlogf = e1 / (4.0 * e * weight)
        h = float(dlogf[0])
    elif fd_fallback:
        fx = np.gradient(f, x, edge_order=2)
        dlogf = fx / (f * weight)
        h = _one_sided_derivative(f, mesh.step) / (f[0] * weight[0])
    else:
        raise MediumError("eps' is required when the finite-difference fallback is disabled")

    if e1 is not None and e2 is not None:
        q = _q_chain_rule(e, e1, e2, mu)
    elif fd_fallback:
        q = _q_finite_difference(f, weight, x)
    else:
        raise MediumError("eps'' is required when the finite-difference fallback is disabled")

    inverse = PchipInterpolator(xi, x, extrapolate=False)
    return MediumProfile(mesh=mesh, eps=e, eps1=e1, eps2=e2, mu=float(mu), xi=xi, f=f,
                         dlogf=dlogf, q=q, h=h, _x_of_xi=inverse)


def _q_chain_rule(e, e1, e2, mu):
    # f = (eps/eps0)^(1/4), d/dxi = (mu*eps)^(-1/2) d/dx applied twice
    return (e2 / (4.0 * e * e) - 5.0 * e1 * e1 / (16.0 * e ** 3)) / mu


def _q_finite_difference(f, weight, x):
    df = np.gradient(f, x, edge_order=2) / weight
    d2f = np.gradient(df, x, edge_order=2) / weight
    return d2f / f


def potential_q(profile: MediumProfile, method: str = "chain") -> np.ndarray:
    """Potential ``q = f''/f`` in the travel-time coordinate.

    ``method="chain"`` uses the exact permittivity derivatives;
    ``method="fd"`` differentiates the sampled ``f`` twice by centred
    differences (second order).
    """
    if method == "chain":
        if profile.eps1 is None or profile.eps2 is None:
            raise MediumError("profile carries no permittivity derivatives")
        return _q_chain_rule(profile.eps, profile.eps1, profile.eps2, profile.mu)
    if method == "fd":
        return _q_finite_difference(profile.f, profile.weight, profile.x)
    raise ValueError(f"unknown method {method!r}")


def integrate_in_xi(g, profile: MediumProfile) -> np.ndarray:
    """``int_0^{xi(x_k)} g(xi) dxi`` for samples ``g`` given on the x-mesh.

    Evaluated as ``int_0^{x_k} g(s) sqrt(mu*eps(s)) ds`` so that no
    integration on the non-uniform xi-mesh is needed. ``g`` may carry leading
    batch axes.
    """
    g = np.asarray(g)
    if g.shape[-1] != profile.n:
        raise MediumError(f"samples have length {g.shape[-1]}, mesh has {profile.n}")
    return nc6_cumulative(g * profile.weight, profile.mesh.step)


def load_table(path):
    """Read a whitespace or comma separated table ``x eps [eps' [eps'']]``.

    Lines starting with ``#`` are ignored.
    """
    with open(path) as fh:
        text = fh.read().replace(",", " ")
    data = np.loadtxt(text.splitlines(), ndmin=2)
    if data.shape[1] < 2:
        raise MediumError(f"{path}: expected at least two columns (x, eps)")
    return data


def profile_from_table(path, mu: float = 1.0, n_points: Optional[int] = None,
                       x_max: Optional[float] = None) -> MediumProfile:
    """Build a profile from a tabulated permittivity.

    The table is resampled onto a uniform mesh over ``[0, x_max]`` by cubic
    spline interpolation (a no-op when it already is such a mesh). Optional
    derivative columns are interpolated the same way.
    """
    data = load_table(path)
    xs = data[:, 0]
    if np.any(np.diff(xs) <= 0):
        raise MediumError(f"{path}: x column must be strictly increasing")
    if abs(xs[0]) > 1e-12:
        raise MediumError(f"{path}: table must start at x = 0")
    x_max = float(xs[-1]) if x_max is None else float(x_max)
    n_points = len(xs) if n_points is None else int(n_points)
    try:
        mesh = UniformMesh.over(0.0, x_max, n_points)
    except MeshError as exc:
        raise MediumError(f"{path}: {exc}") from None
    x = mesh.points
    cols = []
    for j in range(1, min(data.shape[1], 4)):
        if len(xs) == len(x) and np.allclose(xs, x, rtol=0, atol=1e-12 * max(1.0, x_max)):
            cols.append(data[:, j])
        else:
            cols.append(CubicSpline(xs, data[:, j])(x))
    cols += [None] * (3 - len(cols))
    return build_profile(cols[0], mu=mu, x_max=x_max, n_points=n_points,
                         eps1=cols[1], eps2=cols[2])

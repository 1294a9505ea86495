"""Recursive integrals and the formal powers built from them.

``X[n]`` and ``Xt[n]`` are the two recursive-integral sequences with weights
``f**2`` and ``f**-2`` alternating in opposite order; ``phi[n]`` and
``psi[n]`` are the formal powers attached to ``f`` and ``1/f``. For ``f == 1``
all four reduce to ``xi**n``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import comb

from .medium import MediumProfile, integrate_in_xi

MAX_ORDER = 64


class PowersError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FormalPowersTable:
    """Arrays of shape ``(N + 1, n_nodes)`` aligned with the profile mesh."""

    N: int
    X: np.ndarray
    Xt: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    xi: np.ndarray


def build_powers(profile: MediumProfile, N: int, max_order: int = MAX_ORDER) -> FormalPowersTable:
    """Compute ``X``, ``Xt``, ``phi`` and ``psi`` up to order ``N``.

    Each order is ``n * int_0^xi (previous order) * weight`` with the weight
    ``f**2`` or ``f**-2`` chosen by the parity of ``n``; integration uses
    :func:`integrate_in_xi`.
    """
    if N < 1:
        raise PowersError("order N must be at least 1")
    if N > max_order:
        raise PowersError(f"order N={N} exceeds the cap {max_order}")
    f = profile.f
    f2 = f * f
    n_nodes = profile.n
    X = np.empty((N + 1, n_nodes))
    Xt = np.empty((N + 1, n_nodes))
    X[0] = 1.0
    Xt[0] = 1.0
    for n in range(1, N + 1):
        if n % 2:
            X[n] = n * integrate_in_xi(X[n - 1] / f2, profile)
            Xt[n] = n * integrate_in_xi(Xt[n - 1] * f2, profile)
        else:
            X[n] = n * integrate_in_xi(X[n - 1] * f2, profile)
            Xt[n] = n * integrate_in_xi(Xt[n - 1] / f2, profile)
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Xt))):
        raise PowersError("recursive integrals overflowed; shorten the interval or lower N")

    odd = (np.arange(N + 1) % 2 == 1)[:, None]
    phi = np.where(odd, X, Xt) * f
    psi = np.where(odd, Xt, X) / f
    return FormalPowersTable(N=N, X=X, Xt=Xt, phi=phi, psi=psi, xi=profile.xi.copy())


def wave_traces(powers: FormalPowersTable, family: str = "phi"):
    """Diagonal traces of the generalized wave polynomials.

    ``c_n(xi, tau) = sum_{even k} C(n,k) phi_{n-k}(xi) tau**k`` and
    ``s_n(xi, tau) = sum_{odd k} C(n,k) phi_{n-k}(xi) tau**k``, evaluated at
    ``tau = xi``. Parity gives ``c_n(xi, -xi) = c_n(xi, xi)`` and
    ``s_n(xi, -xi) = -s_n(xi, xi)``.

    Returns
    -------
    c, s : ndarray
        Shape ``(N + 1, n_nodes)``; ``s[0]`` is identically zero.
    """
    base = powers.phi if family == "phi" else powers.psi
    N = powers.N
    xi = powers.xi
    c = np.zeros_like(base)
    s = np.zeros_like(base)
    xipow = xi[None, :] ** np.arange(N + 1)[:, None]
    for n in range(N + 1):
        for k in range(n + 1):
            term = comb(n, k, exact=True) * base[n - k] * xipow[k]
            if k % 2:
                s[n] += term
            else:
                c[n] += term
    return c, s


def wave_polynomials(powers: FormalPowersTable, n: int, node: int, tau, family: str = "phi"):
    """Evaluate ``(c_n, s_n)(xi_node, tau)`` for arbitrary ``tau``."""
    base = powers.phi if family == "phi" else powers.psi
    tau = np.asarray(tau, dtype=float)
    c = np.zeros_like(tau)
    s = np.zeros_like(tau)
    for k in range(n + 1):
        term = comb(n, k, exact=True) * base[n - k, node] * tau ** k
        if k % 2:
            s = s + term
        else:
            c = c + term
    return c, s

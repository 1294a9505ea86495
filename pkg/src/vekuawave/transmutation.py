"""Approximate transmutation operators ``T_f`` and ``T_{1/f}``.

Both kernels are expanded in generalized wave polynomials,

    K_f(xi, tau)   ~  sum_n a_n c_n(xi, tau)     + b_n s_n(xi, tau)
    K_1/f(xi, tau) ~ -sum_n b_n c~_n(xi, tau)    + a_n s~_n(xi, tau)

where ``c_n``/``s_n`` are built from ``phi`` and ``c~_n``/``s~_n`` from
``psi``. The coefficients are fitted to the characteristic (Goursat) traces
of ``K_f``. Regrouping by powers of ``tau`` turns each kernel into
``sum_k P_k(xi) tau**k``; the tables ``P_k`` are computed once per mesh node
and every operator application afterwards costs O(N) per frequency.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import comb

from .formal_powers import FormalPowersTable, build_powers, wave_traces
from .medium import MediumProfile, integrate_in_xi
from .quadrature import trig_moments_table

log = logging.getLogger(__name__)

TIE_TOL = 1e-13


class FitError(ValueError):
    pass


@dataclass(frozen=True)
class TransmutationCoeffs:
    """Fitted kernel coefficients.

    ``a`` has entries ``0..N``; ``b[1..N]`` are fitted while ``b[0]`` holds the
    value ``h/2`` of the ``T_{1/f}`` kernel at the origin (``s_0`` vanishes so
    ``b[0]`` never enters ``K_f``).
    """

    N: int
    a: np.ndarray
    b: np.ndarray
    residual_a: float
    residual_b: float
    xi_max: float

    @property
    def residual(self) -> float:
        return max(self.residual_a, self.residual_b)

    @classmethod
    def zero(cls, N: int = 0, xi_max: float = np.inf) -> "TransmutationCoeffs":
        return cls(N, np.zeros(N + 1), np.zeros(N + 1), 0.0, 0.0, xi_max)


def goursat_data(profile: MediumProfile):
    """Even and odd (in ``tau``) parts of the kernel's characteristic traces.

    ``K(xi, xi) = h/2 + 1/2 int_0^xi q`` and ``K(xi, -xi) = h/2``, hence
    ``G_a = h/2 + 1/4 int_0^xi q`` and ``G_b = 1/4 int_0^xi q``.
    """
    quarter = 0.25 * integrate_in_xi(profile.q, profile)
    return 0.5 * profile.h + quarter, quarter


def _lstsq(columns: np.ndarray, rhs: np.ndarray):
    scale = np.abs(columns).max(axis=0)
    scale[scale == 0] = 1.0
    sol, _, rank, _ = np.linalg.lstsq(columns / scale, rhs, rcond=None)
    return sol / scale, rank


class _Traces:
    """Diagonal traces and Goursat targets reused across an order sweep."""

    def __init__(self, profile, powers):
        self.c, self.s = wave_traces(powers, "phi")
        self.ga, self.gb = goursat_data(profile)
        self.h = profile.h
        self.xi_max = profile.xi_max


def _fit(tr: _Traces, N: int) -> TransmutationCoeffs:
    A = tr.c[:N + 1].T
    if not np.any(tr.ga) and not np.any(tr.gb):
        return TransmutationCoeffs(N, np.zeros(N + 1), np.zeros(N + 1), 0.0, 0.0, tr.xi_max)
    a, rank_a = _lstsq(A, tr.ga)
    B = tr.s[1:N + 1].T
    b_tail, rank_b = _lstsq(B, tr.gb)
    if rank_a < N + 1 or rank_b < N:
        raise FitError(f"trace basis is rank deficient at N={N}; reduce the order")
    b = np.concatenate([[0.5 * tr.h], b_tail])
    ra = float(np.abs(A @ a - tr.ga).max())
    rb = float(np.abs(B @ b_tail - tr.gb).max())
    return TransmutationCoeffs(N, a, b, ra, rb, tr.xi_max)


def fit_coefficients(profile: MediumProfile, powers: FormalPowersTable, N: int) -> TransmutationCoeffs:
    """Least-squares fit of ``a_n``, ``b_n`` to the Goursat traces over all nodes."""
    if N > powers.N:
        raise FitError(f"formal powers only go up to order {powers.N}, N={N} requested")
    return _fit(_Traces(profile, powers), N)


def sweep_orders(profile, powers, N_max: int):
    """Fit every order ``1..N_max``; stops at the first rank-deficient order."""
    tr = _Traces(profile, powers)
    fits = []
    for N in range(1, min(N_max, powers.N) + 1):
        try:
            fits.append(_fit(tr, N))
        except FitError:
            log.info("order sweep stopped at N=%d (rank deficient)", N)
            break
    return fits


def select_order(profile, powers, N_max: int, tie_tol: float = TIE_TOL) -> int:
    """Order minimising ``max(residual_a, residual_b)``.

    Residuals within ``tie_tol`` of the minimum count as ties and the smallest
    such ``N`` wins, so rounding noise on the residual floor does not push the
    choice to needlessly high orders.
    """
    fits = sweep_orders(profile, powers, N_max)
    res = np.array([c.residual for c in fits])
    best = res.min()
    return int(np.flatnonzero(res <= best + tie_tol)[0]) + 1


def fit_auto(profile: MediumProfile, N_max: int = 30, order=None):
    """Build formal powers, choose the order and fit. Returns ``(coeffs, powers)``."""
    powers = build_powers(profile, max(N_max, order or 1))
    N = order if order is not None else select_order(profile, powers, N_max)
    return fit_coefficients(profile, powers, N), powers


def kernel_table(coeffs: TransmutationCoeffs, powers: FormalPowersTable, which: str = "f") -> np.ndarray:
    """Coefficients ``P[k, node]`` with ``K(xi_node, tau) = sum_k P[k, node] tau**k``.

    ``which="f"`` gives ``K_f``. ``which="1/f"`` gives ``K_{1/f}``, obtained
    from the same formula with ``(a, b, phi)`` replaced by ``(-b, -a, psi)``.
    """
    N = coeffs.N
    if which == "f":
        even, odd, base = coeffs.a, coeffs.b, powers.phi
    elif which == "1/f":
        even, odd, base = -coeffs.b, -coeffs.a, powers.psi
    else:
        raise ValueError(f"which must be 'f' or '1/f', got {which!r}")
    P = np.zeros((N + 1, base.shape[1]))
    for k in range(N + 1):
        e = even if k % 2 == 0 else odd
        for n in range(k, N + 1):
            P[k] += e[n] * comb(n, k, exact=True) * base[n - k]
    return P


def kernel_table_direct(coeffs, powers, which: str = "1/f") -> np.ndarray:
    """Same as :func:`kernel_table` written out term by term from the explicit
    ``T_{1/f}`` expansion; kept as an independent code path for testing."""
    N = coeffs.N
    a, b = coeffs.a, coeffs.b
    base = powers.phi if which == "f" else powers.psi
    P = np.zeros((N + 1, base.shape[1]))
    for n in range(N + 1):
        for k in range(0, n + 1, 2):
            w = a[n] if which == "f" else -b[n]
            P[k] = P[k] + w * comb(n, k, exact=True) * base[n - k]
        if n >= 1:
            for k in range(1, n + 1, 2):
                w = b[n] if which == "f" else -a[n]
                P[k] = P[k] + w * comb(n, k, exact=True) * base[n - k]
    return P


_CHUNK = 1 << 18


class Transmutation:
    """Fitted operator pair with per-node kernel tables.

    Parameters
    ----------
    coeffs : TransmutationCoeffs
    powers : FormalPowersTable
    """

    def __init__(self, coeffs: TransmutationCoeffs, powers: FormalPowersTable):
        self.coeffs = coeffs
        self.powers = powers
        self.xi = powers.xi
        self.tables = {"f": kernel_table(coeffs, powers, "f"),
                       "1/f": kernel_table(coeffs, powers, "1/f")}

    @classmethod
    def identity(cls, powers: FormalPowersTable) -> "Transmutation":
        return cls(TransmutationCoeffs.zero(0), powers)

    @property
    def N(self) -> int:
        return self.coeffs.N

    def kernel(self, nodes, tau, which: str = "f"):
        """Evaluate the kernel at ``(xi[nodes], tau)`` (broadcast together)."""
        P = self.tables[which][:, np.asarray(nodes)]
        tau = np.asarray(tau, dtype=float)
        out = np.zeros(np.broadcast(P[0], tau).shape)
        for k in range(P.shape[0] - 1, -1, -1):
            out = out * tau + P[k]
        return out

    def exp_image(self, omega, sign: int, nodes, which: str = "f") -> np.ndarray:
        """``T[exp(sign*i*omega*xi)]`` at the given nodes.

        Returns an array of shape ``omega.shape + nodes.shape``. Frequencies
        are processed in chunks so the working set stays bounded and the cost
        is linear in the number of frequencies.
        """
        omega = np.atleast_1d(np.asarray(omega, dtype=float))
        nodes = np.atleast_1d(np.asarray(nodes))
        flat = omega.ravel()
        xi = self.xi[nodes]
        N = self.N
        P = self.tables[which][:, nodes][:, None]        # (N+1, 1) + xi.shape
        out = np.empty(flat.shape + xi.shape, dtype=complex)
        step = max(1, _CHUNK // max(1, xi.size * (N + 1)))
        for lo in range(0, flat.size, step):
            om = flat[lo:lo + step].reshape((-1,) + (1,) * xi.ndim)
            cm, sm = trig_moments_table(N, om, xi)          # (N+1, chunk) + xi.shape
            even = (P[0::2] * cm[0::2]).sum(axis=0)
            odd = (P[1::2] * sm[1::2]).sum(axis=0)
            out[lo:lo + step] = np.exp(1j * sign * om * xi) + 2.0 * even + 2j * sign * odd
        return out.reshape(omega.shape + xi.shape)

    def shifted_coefficients(self, t, nodes, branch: str, which: str = "f") -> np.ndarray:
        """Coefficients ``Q[l]`` with ``T[W(t +- xi)] = W(t +- xi) + sum_l Q[l] M_l``.

        ``M_l = int_{t-xi}^{t+xi} z**l W(z) dz``. For the ``+`` branch
        ``Q[l] = sum_k P_k C(k,l) (-t)**(k-l)``; for the ``-`` branch
        ``Q[l] = sum_k P_k C(k,l) t**(k-l) (-1)**l``. Shape ``(N+1,) + broadcast(t, nodes)``.
        """
        P = self.tables[which][:, np.asarray(nodes)]
        t = np.asarray(t, dtype=float)
        shape = np.broadcast(P[0], t).shape
        N = self.N
        s = -t if branch == "+" else t
        Q = np.zeros((N + 1,) + shape)
        spow = [np.ones(shape)]
        for _ in range(N):
            spow.append(spow[-1] * s)
        for ell in range(N + 1):
            acc = np.zeros(shape)
            for k in range(ell, N + 1):
                acc = acc + P[k] * (comb(k, ell, exact=True) * spow[k - ell])
            Q[ell] = acc if (branch == "+" or ell % 2 == 0) else -acc
        return Q

    def general_image(self, provider, t, nodes, branch: str, which: str = "f",
                      moments=None) -> np.ndarray:
        """``T[W(t + xi)]`` (``branch="+"``) or ``T[W(t - xi)]`` (``"-"``).

        ``provider`` supplies values ``provider(z)`` and definite moments
        ``provider.moments(lmax, z1, z2)`` of shape ``(lmax+1,) + z.shape``.
        ``t`` and ``nodes`` broadcast together. Precomputed ``moments`` may be
        passed to share them between the two operators.
        """
        nodes = np.asarray(nodes)
        t = np.asarray(t, dtype=float)
        xi = self.xi[nodes]
        t, xi = np.broadcast_arrays(t, xi)
        z1, z2 = t - xi, t + xi
        check_domain(provider, z1, z2, t, xi)
        arg = t + xi if branch == "+" else t - xi
        base = provider(arg)
        if self.N == 0 and not np.any(self.tables[which]):
            return np.asarray(base, dtype=complex)
        M = provider.moments(self.N, z1, z2) if moments is None else moments[:self.N + 1]
        Q = self.shifted_coefficients(t, nodes, branch, which)
        return base + (Q * M).sum(axis=0)


class DomainError(ValueError):
    pass


def check_domain(provider, z1, z2, t=None, xi=None) -> None:
    dom = getattr(provider, "domain", None)
    if dom is None:
        return
    lo, hi = dom
    tol = 1e-12 * max(1.0, abs(lo), abs(hi))
    bad = (z1 < lo - tol) | (z2 > hi + tol)
    if np.any(bad):
        i = np.unravel_index(np.flatnonzero(bad)[0], bad.shape)
        where = ""
        if t is not None:
            where = f" at t={float(np.asarray(t)[i]):.6g}, xi={float(np.asarray(xi)[i]):.6g}"
        raise DomainError(
            f"interval [t - xi, t + xi] = [{float(z1[i]):.6g}, {float(z2[i]):.6g}] leaves the "
            f"initial-data domain [{lo:.6g}, {hi:.6g}]{where}")


def apply_Tf_exp(coeffs, powers, omega, sign, node):
    return Transmutation(coeffs, powers).exp_image(omega, sign, node, "f")


def apply_T1f_exp(coeffs, powers, omega, sign, node):
    return Transmutation(coeffs, powers).exp_image(omega, sign, node, "1/f")


def apply_Tf_general(coeffs, powers, provider, t, node, branch):
    return Transmutation(coeffs, powers).general_image(provider, t, node, branch, "f")


def apply_T1f_general(coeffs, powers, provider, t, node, branch):
    return Transmutation(coeffs, powers).general_image(provider, t, node, branch, "1/f")


def exp_image_naive(coeffs, powers, omega: float, sign: int, node: int, which: str = "f") -> complex:
    """Direct double-sum evaluation of the exponential image, O(N^2) per call."""
    xi = powers.xi[node]
    N = coeffs.N
    cm, sm = trig_moments_table(N, omega, xi)
    if which == "f":
        ev, od, base = coeffs.a, coeffs.b, powers.phi[:, node]
    else:
        ev, od, base = -coeffs.b, -coeffs.a, powers.psi[:, node]
    total = np.exp(1j * sign * omega * xi)
    for n in range(N + 1):
        acc_c = sum(comb(n, k, exact=True) * base[n - k] * cm[k] for k in range(0, n + 1, 2))
        total += 2.0 * ev[n] * acc_c
        if n >= 1:
            acc_s = sum(comb(n, k, exact=True) * base[n - k] * sm[k] for k in range(1, n + 1, 2))
            total += 2j * sign * od[n] * acc_s
    return total


def write_report(coeffs: TransmutationCoeffs, path) -> None:
    """Plain-text coefficient report: ``n a_n b_n`` plus residual header."""
    with open(path, "w") as fh:
        fh.write(f"# N = {coeffs.N}\n")
        fh.write(f"# residual_a = {coeffs.residual_a:.6e}\n")
        fh.write(f"# residual_b = {coeffs.residual_b:.6e}\n")
        fh.write(f"# xi_max = {coeffs.xi_max:.17g}\n")
        fh.write("# n a_n b_n\n")
        for n in range(coeffs.N + 1):
            fh.write(f"{n:d} {coeffs.a[n]:.17e} {coeffs.b[n]:.17e}\n")


def read_report(path) -> TransmutationCoeffs:
    meta = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                if "=" in line:
                    key, val = line[1:].split("=")
                    meta[key.strip()] = float(val)
            elif line.strip():
                rows.append([float(v) for v in line.split()])
    data = np.array(rows)
    return TransmutationCoeffs(int(meta["N"]), data[:, 1], data[:, 2], meta["residual_a"],
                               meta["residual_b"], meta["xi_max"])


@dataclass(frozen=True)
class ExactKernelPair:
    """Closed-form kernels for ``f(xi) = (1 + c*xi)**-2``."""

    K_f: Callable
    K_1f: Callable
    scale: float


def exact_kernels_l15(alpha: float = 5.0, beta: float = 1.0, mu: float = 1.0) -> ExactKernelPair:
    """Closed-form kernels for the ``eps = (alpha x + beta)**(-8/5)`` family.

    For ``ell = 1/5`` the normalised ``f`` is ``(1 + c xi)**-2`` with
    ``c = alpha*ell / (sqrt(mu) * beta**ell)``; the kernels for ``c != 1``
    follow by the scaling ``K(xi, t) = c K_1(c xi, c t)``.
    """
    ell = 0.2
    if not (beta > 0 and mu > 0 and alpha != 0):
        raise ValueError("need beta > 0, mu > 0 and alpha != 0")
    c = alpha * ell / (np.sqrt(mu) * beta ** ell)

    def k_f(xi, t):
        x, s = c * np.asarray(xi, float), c * np.asarray(t, float)
        return c * ((3 * s - 1) * (x + 1) ** 2 - 3 * (s - 1) ** 2 * (s + 1)) / (4 * (x + 1) ** 2)

    def k_1f(xi, t):
        x, s = c * np.asarray(xi, float), c * np.asarray(t, float)
        return c * (3 * x ** 2 + 6 * x + 4 - 3 * s ** 2 + 2 * s) / (4 * (x + 1))

    return ExactKernelPair(k_f, k_1f, c)

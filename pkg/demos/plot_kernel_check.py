"""
Fitted kernels against closed forms
===================================

The fitted kernel expansion is compared with explicit kernels on a grid
covering the characteristic triangle ``|tau| <= xi``, for increasing
order ``N``.
"""

import numpy as np

import vekuawave as vw
from vekuawave.transmutation import exact_kernels_l15

prof = vw.build_profile(vw.PowerLaw(5.0, 1.0, -1.6), mu=1.0, x_max=2.0, n_points=2001)
exact = exact_kernels_l15(5.0, 1.0, 1.0)

nodes = np.linspace(0, prof.n - 1, 51).round().astype(int)[1:]
xi = prof.xi[nodes][:, None]
tau = xi * np.linspace(-1, 1, 50)[None, :]

for N in (1, 2, 3, 6):
    coeffs, powers = vw.fit_auto(prof, order=N)
    ops = vw.Transmutation(coeffs, powers)
    ef = np.abs(ops.kernel(nodes[:, None], tau, "f") - exact.K_f(xi, tau)).max()
    e1 = np.abs(ops.kernel(nodes[:, None], tau, "1/f") - exact.K_1f(xi, tau)).max()
    print(f"N = {N}:  sup |K_f - exact| = {ef:.2e}   sup |K_1/f - exact| = {e1:.2e}")

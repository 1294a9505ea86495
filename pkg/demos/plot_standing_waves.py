"""
Standing waves in an inverse-square layer
=========================================

Four trigonometric components enter a layer with ``eps = (2x + 1)**-2``.
The transmitted field is computed through transmutation operators and
compared with the closed-form solution.
"""

import time

import numpy as np

import vekuawave as vw
from vekuawave import oracles

##############################################################################
# Medium and operators
# --------------------
# The order ``N`` of the kernel expansion is picked automatically from the
# Goursat-trace residuals.

tic = time.perf_counter()
prof = vw.build_profile(vw.PowerLaw(2.0, 1.0, -2.0), mu=1.0, x_max=6.0, n_points=5001)
coeffs, powers = vw.fit_auto(prof, N_max=30)
print(f"selected N = {coeffs.N}, fit residual {coeffs.residual:.2e}")

##############################################################################
# Interface data
# --------------
# ``W0 = 4 cos((C+1) t) + 4 cos((C+2) t)`` on both projections, i.e. four
# exponentials with weight 2.

terms = oracles.example2_terms()
C = terms[0].C
freqs = np.array([C + 1, -(C + 1), C + 2, -(C + 2)])
data = vw.TrigInitialData.from_gamma(freqs, np.full(4, 2.0), np.full(4, 2.0), prof)

grid = vw.GridSpec.regular(prof, 101, 0.0, 6.0, 101)
fg = vw.solve_trig(data, coeffs, powers, prof, grid)
print(f"solved {fg.E.shape} grid in {time.perf_counter() - tic:.3f} s")

##############################################################################
# Comparison with the closed form

X, T = np.meshgrid(fg.x, fg.t, indexing="ij")
E, H = oracles.example2_fields(terms, X, T)
print(f"max |E - E_exact| = {np.abs(fg.E - E).max():.2e}")
print(f"max |H - H_exact| = {np.abs(fg.H - H).max():.2e}")

for ix in (0, 50, 100):
    print(f"x = {fg.x[ix]:4.1f}:  |E| ranges over [{np.abs(fg.E[ix]).min():.3f}, "
          f"{np.abs(fg.E[ix]).max():.3f}]")

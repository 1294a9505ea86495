"""
Single-wave approximation versus the full operator
==================================================

Dropping both transmutation operators keeps only the travelling-wave
part of the solution. In a strongly graded layer the reflected
contribution is large and the approximation breaks down.
"""

import numpy as np

import vekuawave as vw
from vekuawave import oracles

prof = vw.build_profile(vw.PowerLaw(2.0, 1.0, -2.0), mu=1.0, x_max=5.0, n_points=5001)
coeffs, powers = vw.fit_auto(prof)

p = oracles.Example1Params()
W0 = oracles.example1_W(p, 0.0, 0.0)
data = vw.TrigInitialData.from_gamma([p.omega0], [W0.plus], [W0.minus], prof)
grid = vw.GridSpec.regular(prof, 51, 0.0, 5.0, 101)

full = vw.solve_trig(data, coeffs, powers, prof, grid)
approx = vw.single_wave(data, prof, grid)
X, T = np.meshgrid(grid.x, grid.t, indexing="ij")
E, H = oracles.example1_fields(p, X, T)

##############################################################################
# Error against the closed form, column by column in ``x``.

print(" x      full        single-wave")
for ix in range(0, 51, 10):
    print(f"{grid.x[ix]:4.1f}  {np.abs(full.E[ix] - E[ix]).max():.2e}   "
          f"{np.abs(approx.E[ix] - E[ix]).max():.2e}")

##############################################################################
# Both agree at the interface, where the operators reduce to the identity.

print(f"interface gap: {np.abs(full.E[0] - approx.E[0]).max():.1e}")

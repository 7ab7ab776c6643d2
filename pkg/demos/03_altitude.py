"""Where should Bob fly?  Higher means more redshift but more diffraction loss.

Run: python demos/03_altitude.py
"""
import math

import numpy as np

from lossy_probe import BoundQuery, GaussianProbe, ProfileSpec, RayleighLink, squeeze_db_to_r, sweep_altitude

grid = np.logspace(3, 8, 11)
q = BoundQuery(spec=ProfileSpec("gaussian"), probe=GaussianProbe(math.sqrt(1000.0)))
print("Gaussian profile, coherent probe with 1000 photons, z_R = 1 km")
for p in sweep_altitude(RayleighLink(1000.0), q, grid):
    print(f"  L = {p.length:9.3g} m  t = {p.t:.3e}  bound = {p.bound:.3e}")

squeezed = GaussianProbe(math.sqrt(1000.0), r=squeeze_db_to_r(10.0))
q = BoundQuery(spec=ProfileSpec("tanh_rect", delta_smooth=0.01), probe=squeezed)
best = min(sweep_altitude(RayleighLink(1000.0), q, grid), key=lambda p: p.bound)
print(f"smoothed box with 10 dB squeezing: best height {best.length:.3g} m, bound {best.bound:.3e}")

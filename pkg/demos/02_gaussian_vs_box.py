"""Comparing detector profiles for the Earth-to-geostationary link.

Bob detunes his detector by eps to sit on the steep part of the overlap
curve.  A box-like spectrum has a much steeper edge than a Gaussian one.

Run: python demos/02_gaussian_vs_box.py
"""
from lossy_probe import BoundQuery, GeoConfig, ProfileSpec, optimal_epsilon_gaussian
from lossy_probe.bounds import optimize_fraction_and_epsilon

geo = GeoConfig()
print(f"redshift between ground and GEO: delta = {geo.delta:.3e}")

opt = optimal_epsilon_gaussian(ProfileSpec("gaussian"), geo.delta)
print(f"Gaussian profile: best operating point x = {opt.x_numeric:.4f} (analytic 1/2)")

# Fully squeezed probes keep improving as eps -> delta, so the detuning ends
# up at the floor of the search grid (2e-4 Hz).
for spec in (ProfileSpec("gaussian"), ProfileSpec("tanh_rect", delta_smooth=0.01)):
    y, eps, bound = optimize_fraction_and_epsilon(BoundQuery(spec=spec), n_bar=2.0)
    print(f"{spec.family:>10}: best bound {bound:.3e} with squeezing fraction {y:.2f}, detuning (delta - eps) omega0 = {(geo.delta - eps) * spec.omega0:.4g} Hz")

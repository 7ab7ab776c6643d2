"""How much information survives a lossy channel, and when squeezing helps.

Run: python demos/01_channel_qfi.py
"""
from lossy_probe import ChannelConfig, GaussianProbe, qfi_squeezed_coherent
from lossy_probe.channel import optimize_squeezing_fraction

theta = 1 - 1e-3

# A perfect channel with a weak probe: putting the photons into squeezing wins.
print("t = 1, theta = 0.999")
for n_bar in (1.0, 10.0, 100.0, 1000.0):
    cfg = ChannelConfig(1.0, theta)
    coherent = qfi_squeezed_coherent(cfg, GaussianProbe.from_fraction(n_bar, 0.0))
    y_star, best = optimize_squeezing_fraction(n_bar, cfg)
    print(f"  n = {n_bar:6.0f}: coherent QFI {coherent:10.4g}, best {best:10.4g} at y = {y_star:.3f}")

# With loss the optimum moves towards coherent light.
print("\nn = 100, theta = 0.999")
for t in (0.2, 0.5, 0.8, 1.0):
    cfg = ChannelConfig(t, theta)
    coherent = qfi_squeezed_coherent(cfg, GaussianProbe(10.0))
    y_star, best = optimize_squeezing_fraction(100.0, cfg)
    print(f"  t = {t:.1f}: coherent QFI {coherent:9.4g}, best {best:9.4g} at y = {y_star:.3f}")

"""
Cavity excitation spectra
=========================

Resonant and dispersive TLS, with the TLS-free spectrum for comparison.
"""

import numpy as np

from hybridoms.ladder import GROUND_LABEL, DressedLabel
from hybridoms.presets import get_preset
from hybridoms.scattering import (ScatteringContext, cavity_excitation, cavity_excitation_spectrum,
                                  default_excitation_grid, predict_excitation_peaks, total_transmission)

# Resonant case
ctx = ScatteringContext.build(get_preset("fig2").params)
p, d = ctx.params, ctx.derived
spec = cavity_excitation_spectrum(ctx, GROUND_LABEL, default_excitation_grid(ctx))

print("predicted vs found maxima (resonant)")
found = [pk.position for pk in spec.peaks(rel_height=1e-3)]
for pr in predict_excitation_peaks(ctx, n_max=2):
    near = min(found, key=lambda x: abs(x - pr.delta_k))
    print(f"  {str(pr.label):>3}  predicted {pr.delta_k:+.5f}  found {near:+.5f}  weight {pr.weight:.4f}")

# without the TLS each sideband is a single line at -delta1 + n omega_b
flat = ScatteringContext.build(p.replace(lam=0.0))
x = np.linspace(-d.delta1 + 0.9, -d.delta1 + 1.1, 9)
print("\nfirst sideband, lam = 5 kappa vs lam = 0")
for xi, a, b in zip(x, cavity_excitation(ctx, x), cavity_excitation(flat, x)):
    print(f"  {xi:+.3f}  {a:10.4f}  {b:10.4f}")

# Dispersive case: the doublet collapses to one strong line per sideband
ctx = ScatteringContext.build(get_preset("fig3").params)
p = ctx.params
print(f"\ndispersive: Delta_ab = {p.delta_ab:.2f}, lam^2/Delta_ab = {p.lam**2 / p.delta_ab:.1e}")
w = {pr.label: pr.weight for pr in predict_excitation_peaks(ctx, n_max=3)}
for n in (1, 2, 3):
    ratio = w[DressedLabel(n, "+")] / w[DressedLabel(n, "-")]
    print(f"  n={n}: w(n+)/w(n-) = {ratio:.5f}   first-order estimate {n * p.lam**2 / p.delta_ab**2:.5f}")

# lossless scattering: every photon comes back out
grid = np.linspace(-2.5, 5.0, 10_000)
print("\nmax |sum |t|^2 - 1| =", np.max(np.abs(total_transmission(ctx, grid) - 1)))

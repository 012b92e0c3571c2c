"""
Qubit tomography from transmission peaks
========================================

Rotate the TLS into each of three mutually unbiased bases, read the two
first-sideband peak heights, and rebuild the density matrix.
"""

import numpy as np

from hybridoms.presets import get_preset
from hybridoms.qubit import QubitDensityMatrix
from hybridoms.scattering import ScatteringContext
from hybridoms.tomography import MUB, branch_positions, calibrate, fidelity, measure_all, reconstruct

pre = get_preset("fig6")
ctx = ScatteringContext.build(pre.params)
pulse = pre.pulse()
down, up = branch_positions(ctx, pulse)
print(f"down branch at {down:+.6f}, up branch at {up:+.6f}, separation {abs(up - down) / ctx.kappa:.2f} kappa")

truth = QubitDensityMatrix.from_bloch(*pre.bloch)
probs = measure_all(ctx, truth, pulse)
exact = MUB.exact_probabilities(truth.matrix)
for s in range(3):
    print(f"basis {s + 1}: measured ({probs[s, 0]:.4f}, {probs[s, 1]:.4f})   exact ({exact[s, 0]:.4f}, {exact[s, 1]:.4f})")

rho = reconstruct(probs)
np.set_printoptions(precision=4, suppress=True)
print("reconstructed:\n", rho.matrix)
print(f"fidelity {fidelity(truth, rho):.6f}")

# the two branches do not convert population into height identically
h_down, h_up = calibrate(ctx, pulse)
print(f"\npure-state heights: down {h_down:.1f}, up {h_up:.1f} (ratio {h_up / h_down:.4f})")
cal = measure_all(ctx, truth, pulse, calibration=(h_down, h_up))
print(f"calibrated fidelity {fidelity(truth, reconstruct(cal)):.8f}")

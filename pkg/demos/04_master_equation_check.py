"""
Master-equation cross-check
===========================

Weakly drive the cavity and solve for the steady state; the photon number
versus drive detuning should trace the analytic excitation lines.
Expect about a minute of runtime.
"""

import time

import numpy as np

from hybridoms.ladder import GROUND_LABEL, DressedLabel
from hybridoms.lindblad import TruncationSpec, photon_number_sweep
from hybridoms.presets import get_preset
from hybridoms.scattering import ScatteringContext, cavity_excitation

pre = get_preset("fig2")
cold = pre.params.replace(n_a=0.0, n_b=0.0)
ctx = ScatteringContext.build(cold)
k = cold.kappa

# two short windows: the main line and the lower member of the first doublet
for lab in (GROUND_LABEL, DressedLabel(1, "-")):
    x0 = ctx.resonance(lab)
    grid = np.linspace(x0 - 1.5 * k, x0 + 1.5 * k, 21)
    t0 = time.perf_counter()
    sweep = photon_number_sweep(cold, pre.eta(), grid, TruncationSpec(3, 25))
    ana = cavity_excitation(ctx, grid)
    pk = sweep.highest_peak()
    print(f"{str(lab):>3}: analytic line {x0:+.5f}, master equation {pk.position:+.5f} "
          f"({(pk.position - x0) / k:+.3f} kappa), {time.perf_counter() - t0:.1f} s")
    # shapes after normalising each to its own maximum
    for xi, a, b in zip(grid[::4], ana[::4] / ana.max(), sweep.values[::4] / pk.height):
        print(f"     {xi - x0:+.4f}  analytic {a:.3f}  numeric {b:.3f}")

# thermal occupation adds lines from the populated |1 xi> states
warm = pre.params
x = ctx.resonance(DressedLabel(2, "+"), DressedLabel(1, "+"))
grid = np.linspace(x - k, x + k, 11)
sweep = photon_number_sweep(warm, pre.eta(), grid)
print(f"\nthermal line |1+> -> |2+>: expected {x:+.5f}, found {sweep.highest_peak().position:+.5f}")

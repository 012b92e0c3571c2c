"""
Transmitted single-photon wave packets
======================================

A Gaussian photon tuned to the main excitation line leaves the cavity
either elastically or red-shifted by the energy it handed to the mechanics.
"""

import numpy as np

from hybridoms.ladder import GROUND_LABEL, DressedLabel
from hybridoms.presets import get_preset
from hybridoms.pulse import PulseSpec, channel_probabilities, mixed_state_spectrum, transmission_spectrum
from hybridoms.scattering import ScatteringContext

pre = get_preset("fig4ac")
ctx = ScatteringContext.build(pre.params)
p, d = ctx.params, ctx.derived
pulse = pre.pulse()
x0 = pulse.center_detuning(p)
print(f"pulse centre {x0:+.4f}, width d = {pulse.d}")

# the elastic line has a hole where direct and re-emitted light cancel
grid = np.linspace(x0 - 0.02, x0 + 0.02, 9)
s = transmission_spectrum(ctx, pulse, GROUND_LABEL, grid, check_norm=False)
for xi, v in zip(grid, s.values):
    print(f"  {xi - x0:+.3f}  {v:9.3f}  " + "#" * int(v / 3))

# where the photon ends up
probs = channel_probabilities(ctx, pulse, GROUND_LABEL)
print("\nchannel probabilities (final TLS-MR state)")
for lab, v in sorted(probs.items(), key=lambda kv: -kv[1])[:7]:
    print(f"  {str(lab):>3}  {v:.4f}")
print("total:", sum(probs.values()))

# weaker optomechanics: sidebands fade
weak = get_preset("fig5")
wctx = ScatteringContext.build(weak.params)
wp = channel_probabilities(wctx, weak.pulse(), GROUND_LABEL)
one = [DressedLabel(1, "+"), DressedLabel(1, "-")]
print(f"\ndoublet/main: g=0.8 -> {sum(probs[k] for k in one) / probs[GROUND_LABEL]:.3f}, "
      f"g=0.2 -> {sum(wp[k] for k in one) / wp[GROUND_LABEL]:.4f}")

# dispersive TLS: the sideband spacing depends on the TLS state
pre = get_preset("fig4df")
ctx = ScatteringContext.build(pre.params)
p, d = ctx.params, ctx.derived
chi = p.lam**2 / p.delta_ab
for name, rho, centre in (("down", np.diag([1.0, 0.0]), -d.delta1 - d.delta2),
                          ("up", np.diag([0.0, 1.0]), -d.delta1 + d.delta2)):
    pulse = PulseSpec.at_detuning(p, centre, p.kappa)
    x = centre - (p.omega_b - chi if name == "down" else p.omega_b + chi)
    g = np.linspace(x - 3 * p.kappa, x + 3 * p.kappa, 601)
    pk = mixed_state_spectrum(ctx, pulse, rho, g, check_norm=False).highest_peak()
    print(f"TLS {name:>4}: first sideband at {pk.position:+.6f} (estimate {x:+.6f})")

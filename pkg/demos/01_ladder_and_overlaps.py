"""
Dressed ladder and Franck-Condon overlaps
=========================================

A walk through the energy ladder of the TLS-MR subsystem and the overlap
matrix that sets every line strength in the spectra.
"""

import numpy as np

from hybridoms import SystemParams, derive_params
from hybridoms.ladder import GROUND_LABEL, DressedLabel, dressed_state, ladder_labels, total_energy
from hybridoms.overlaps import displacement_element, overlap_matrix

# resonant TLS and mechanics, strong optomechanics
p = SystemParams(omega_a=1.0, g=1.2, lam=0.05, kappa=0.01)
d = derive_params(p)
print(f"beta = {d.beta:.3f}, alpha = {d.alpha:.4f}")
print(f"delta1 = {d.delta1:.4f}, delta2 = {d.delta2:.5f}")

# zero-photon ladder: the doublets split by 2 sqrt(n) lam
for lab in ladder_labels(3):
    print(f"  {str(lab):>3}  E0 = {total_energy(0, lab, p):+.5f}   E1 - omega_c = {total_energy(1, lab, p) - p.omega_c:+.5f}")

# at resonance each doublet is an equal mix of |n-1, up> and |n, down>
s = dressed_state(DressedLabel(1, "+"), p)
print(f"|1+> = {s.c_up:.4f} |0 up> + {s.c_down:.4f} |1 down>")

# a photon displaces the mechanics; the vacuum row is Poissonian
row = np.array([displacement_element(0, n, d.beta) for n in range(12)])
print("|<0|D(beta)|n>|^2:", np.round(row**2, 4))
print("sum over 200 levels:", sum(displacement_element(0, n, d.beta) ** 2 for n in range(200)))

# dressed overlaps: the first row gives the excitation weights from the ground state
om = overlap_matrix(p)
print(f"default truncation n_trunc = {om.n_trunc}")
for lab in ladder_labels(2):
    print(f"  <0g|U|{lab}> = {om[GROUND_LABEL, lab]:+.6f}")

# truncation check: rows with small n are unitary to high precision
print("worst row-norm defect, n <= 6:", np.max(np.abs(om.row_norm_defect()[:13])))

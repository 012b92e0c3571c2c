"""Dressed eigenstates of the TLS-MR subsystem and the perturbed energies.

The TLS-MR Jaynes-Cummings ladder is labelled by ``(n, xi)``: ``n`` is the
total TLS-MR excitation number and ``xi`` is ``"+"``/``"-"`` for the dressed
doublet (``n >= 1``) or ``"g"`` for the ground state ``|0, down>``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .params import SystemParams, derive_params, mixing_angle

PLUS, MINUS, GROUND = "+", "-", "g"


class DressedLabel(NamedTuple):
    n: int
    xi: str

    def validate(self) -> "DressedLabel":
        if self.n < 0:
            raise ValueError(f"negative excitation number in {self}")
        if (self.xi == GROUND) != (self.n == 0) or self.xi not in (PLUS, MINUS, GROUND):
            raise ValueError(f"invalid dressed label {self}")
        return self

    def __str__(self):
        return "0g" if self.xi == GROUND else f"{self.n}{self.xi}"

    @classmethod
    def parse(cls, text: str) -> "DressedLabel":
        """Parse ``"0g"``, ``"1+"``, ``"2,-"``, ``"0,down"`` style labels."""
        s = text.strip().replace(",", "").replace(" ", "")
        aliases = {"down": GROUND, "ground": GROUND, "plus": PLUS, "minus": MINUS}
        for word, sym in aliases.items():
            if s.endswith(word):
                s = s[: -len(word)] + sym
        if not s or s[-1] not in (PLUS, MINUS, GROUND) or not s[:-1].isdigit():
            raise ValueError(f"cannot parse dressed label {text!r}")
        return cls(int(s[:-1]), s[-1]).validate()


GROUND_LABEL = DressedLabel(0, GROUND)


def ladder_labels(n_max: int) -> list[DressedLabel]:
    """Labels ``0g, 1+, 1-, 2+, 2-, ...`` up to excitation number ``n_max``."""
    labels = [GROUND_LABEL]
    for n in range(1, n_max + 1):
        labels += [DressedLabel(n, PLUS), DressedLabel(n, MINUS)]
    return labels


class DressedState(NamedTuple):
    label: DressedLabel
    c_up: float  # amplitude on |n-1>_b |up>
    c_down: float  # amplitude on |n>_b |down>
    energy_tilde: float


def _theta(n: int, p: SystemParams) -> float:
    return mixing_angle(n, p.lam, p.delta_ab)


def dressed_energy(label: DressedLabel, p: SystemParams) -> float:
    """Eigenenergy of the bare TLS-MR Jaynes-Cummings Hamiltonian."""
    n, xi = label.validate()
    if xi == GROUND:
        return -0.5 * p.omega_a
    root = 0.5 * math.sqrt(p.delta_ab**2 + 4 * n * p.lam**2)
    return (n - 0.5) * p.omega_b + (root if xi == PLUS else -root)


def total_energy(m: int, label: DressedLabel, p: SystemParams) -> float:
    """First-order energy of ``|m>_c |n xi>`` in the displaced/rotated frame."""
    return total_energy_offset(m, label, p) + m * p.omega_c


def total_energy_offset(m: int, label: DressedLabel, p: SystemParams) -> float:
    """:func:`total_energy` with the bare photon energy ``m * omega_c`` removed.

    Spectra are reported against the cavity detuning, so working with the
    offset avoids cancelling a large ``omega_c``.
    """
    if m < 0:
        raise ValueError("photon number must be non-negative")
    d = derive_params(p) if m else None
    eps = dressed_energy(label, p)
    if m == 0:
        return eps
    m2 = m * m
    if label.xi == GROUND:
        return -m2 * d.delta1 + eps - m2 * d.delta2
    shift = m2 * d.delta2 * math.cos(2 * _theta(label.n, p))
    return -m2 * d.delta1 + eps + (shift if label.xi == PLUS else -shift)


def dressed_state(label: DressedLabel, p: SystemParams) -> DressedState:
    n, xi = label.validate()
    eps = dressed_energy(label, p)
    if xi == GROUND:
        return DressedState(label, 0.0, 1.0, eps)
    th = _theta(n, p)
    if xi == PLUS:
        return DressedState(label, math.cos(th), math.sin(th), eps)
    return DressedState(label, -math.sin(th), math.cos(th), eps)


def jc_block(n: int, p: SystemParams) -> np.ndarray:
    """Exact 2x2 Hamiltonian on ``(|n-1>_b|up>, |n>_b|down>)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    off = p.lam * math.sqrt(n)
    return np.array([
        [(n - 1) * p.omega_b + 0.5 * p.omega_a, off],
        [off, n * p.omega_b - 0.5 * p.omega_a],
    ])


def jc_block_eigensystem(n: int, p: SystemParams):
    """Numerical diagonalisation of :func:`jc_block`, ordered ``(+, -)``.

    Eigenvectors are sign-fixed to match the closed-form convention, so the
    result can be compared entry by entry with :func:`dressed_state`.
    """
    w, v = np.linalg.eigh(jc_block(n, p))
    w, v = w[::-1], v[:, ::-1]
    # + branch: c_down >= 0 (sin theta >= 0); - branch: c_down >= 0 (cos theta >= 0)
    for k in range(2):
        ref = v[1, k] if abs(v[1, k]) > 1e-14 else (v[0, k] if k == 0 else -v[0, k])
        if ref < 0:
            v[:, k] = -v[:, k]
    return w, v


def dispersive_energy_check(label: DressedLabel, p: SystemParams):
    """Exact dressed energy, its large-detuning approximation and their gap."""
    n, xi = label.validate()
    if p.delta_ab == 0:
        raise ValueError("the dispersive expansion requires a non-zero TLS-MR detuning")
    exact = dressed_energy(label, p)
    chi = p.lam**2 / p.delta_ab
    if xi == GROUND:
        approx = -0.5 * p.omega_a
    elif xi == PLUS:
        approx = 0.5 * p.omega_a + chi + (n - 1) * (p.omega_b + chi)
    else:
        approx = -0.5 * p.omega_a + n * (p.omega_b - chi)
    return exact, approx, abs(exact - approx)

"""Qubit tomography read out from transmitted single-photon spectra.

In the dispersive regime the first red sideband splits by TLS state: the
``down`` branch (ground ``0g`` -> ``1-``) and the ``up`` branch (``1+`` -> ``2+``)
sit ``2 lam^2 / Delta_ab`` apart. Their heights measure the TLS populations.
Rotating the TLS by each of three mutually unbiased bases before the photon
arrives gives the full density matrix.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .ladder import GROUND_LABEL, MINUS, PLUS, DressedLabel
from .peaks import highest_peak
from .pulse import PulseSpec, mixed_state_spectrum
from .qubit import IDENTITY, SIGMA_X, QubitDensityMatrix, as_density_matrix
from .scattering import ScatteringContext


class ResolutionError(ValueError):
    """The two TLS branches of the sideband overlap."""


@dataclass(frozen=True)
class MubSet:
    """Three mutually unbiased qubit bases ``|psi_sl> = U_s |l>``, ``l`` in (down, up)."""

    unitaries: tuple

    @classmethod
    def standard(cls) -> "MubSet":
        hadamard = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
        # exp(i pi/4 sigma_x)
        u3 = math.cos(math.pi / 4) * IDENTITY + 1j * math.sin(math.pi / 4) * SIGMA_X
        return cls((IDENTITY.copy(), hadamard, u3))

    def __len__(self):
        return len(self.unitaries)

    def state(self, s: int, l: int) -> np.ndarray:
        return self.unitaries[s][:, l]

    def projector(self, s: int, l: int) -> np.ndarray:
        v = self.state(s, l)
        return np.outer(v, v.conj())

    def rotate(self, rho, s: int) -> np.ndarray:
        """``U_s^dag rho U_s``; its diagonal holds the basis-``s`` outcome probabilities."""
        u = self.unitaries[s]
        return u.conj().T @ np.asarray(rho) @ u

    def exact_probabilities(self, rho) -> np.ndarray:
        """3x2 table ``p[s, l] = <psi_sl| rho |psi_sl>``."""
        return np.array([np.real(np.diag(self.rotate(rho, s))) for s in range(len(self))])


MUB = MubSet.standard()


def tomography_pulse(ctx: ScatteringContext, d: float | None = None) -> PulseSpec:
    """Pulse at ``omega_c - delta1`` with width ``0.2 kappa`` unless given."""
    d = 0.2 * ctx.kappa if d is None else d
    return PulseSpec.at_detuning(ctx.params, -ctx.derived.delta1, d)


def branch_positions(ctx: ScatteringContext, pulse: PulseSpec) -> tuple[float, float]:
    """Expected first-sideband detunings of the down and up branches.

    A narrow pulse is transmitted at its own centre less the energy left in
    the TLS-MR subsystem.
    """
    delta0 = pulse.center_detuning(ctx.params)
    down = delta0 - ctx.emission_shift(DressedLabel(1, MINUS), GROUND_LABEL)
    up = delta0 - ctx.emission_shift(DressedLabel(2, PLUS), DressedLabel(1, PLUS))
    return down, up


def _branch_grids(ctx, pulse, points):
    down, up = branch_positions(ctx, pulse)
    sep = abs(up - down)
    limit = 3 * min(pulse.d, ctx.kappa)
    if sep < limit:
        raise ResolutionError(f"branch separation {sep:.3g} below 3 min(d, kappa) = {limit:.3g}")
    half = min(0.5 * sep, 4 * pulse.d)
    return [np.linspace(c - half, c + half, points) for c in (down, up)]


def branch_heights(ctx: ScatteringContext, rho, pulse: PulseSpec, points: int = 401) -> tuple[float, float]:
    """Refined maxima of the transmitted spectrum in the down and up windows."""
    out = []
    for grid in _branch_grids(ctx, pulse, points):
        series = mixed_state_spectrum(ctx, pulse, rho, grid, check_norm=False)
        out.append(highest_peak(series.grid, series.values).height)
    return out[0], out[1]


def calibrate(ctx: ScatteringContext, pulse: PulseSpec | None = None) -> tuple[float, float]:
    """Branch heights for the pure states ``|down>`` and ``|up>``.

    Their ratio measures how unequally the two branches convert population
    into peak height; equal constants would give a ratio of one.
    """
    pulse = pulse or tomography_pulse(ctx)
    h_down = branch_heights(ctx, np.diag([1.0, 0.0]), pulse)[0]
    h_up = branch_heights(ctx, np.diag([0.0, 1.0]), pulse)[1]
    return h_down, h_up


def simulate_probabilities(ctx: ScatteringContext, rho, s: int, pulse: PulseSpec | None = None,
                           mub: MubSet = MUB, calibration: tuple[float, float] | None = None
                           ) -> tuple[float, float]:
    """Outcome probabilities ``(p_s_down, p_s_up)`` from simulated peak heights.

    ``s`` is the zero-based basis index. The TLS state is rotated to
    ``U_s^dag rho U_s`` before scattering; the two branch heights are
    normalised to sum to one. With ``calibration`` (see :func:`calibrate`)
    each height is first divided by its pure-state reference.
    """
    pulse = pulse or tomography_pulse(ctx)
    rho = as_density_matrix(rho)
    rotated = QubitDensityMatrix(mub.rotate(rho.matrix, s))
    h_down, h_up = branch_heights(ctx, rotated, pulse)
    if calibration is not None:
        h_down, h_up = h_down / calibration[0], h_up / calibration[1]
    total = h_down + h_up
    return h_down / total, h_up / total


def measure_all(ctx: ScatteringContext, rho, pulse: PulseSpec | None = None, mub: MubSet = MUB,
                calibration: tuple[float, float] | None = None) -> np.ndarray:
    """Probability table for every basis, shape ``(3, 2)``."""
    return np.array([simulate_probabilities(ctx, rho, s, pulse, mub, calibration) for s in range(len(mub))])


def reconstruct(probabilities, mub: MubSet = MUB, atol: float = 1e-3) -> QubitDensityMatrix:
    """``rho = sum_sl p_sl P_sl - I``, Hermitised and trace-normalised."""
    p = np.asarray(probabilities, dtype=float)
    if p.shape != (len(mub), 2):
        raise ValueError(f"expected a {len(mub)}x2 probability table, got shape {p.shape}")
    sums = p.sum(axis=1)
    if np.any(np.abs(sums - 1) > atol):
        raise ValueError(f"probability rows must sum to one, got {sums}")
    rho = -IDENTITY.copy()
    for s in range(len(mub)):
        for l in range(2):
            rho = rho + p[s, l] * mub.projector(s, l)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    low = np.linalg.eigvalsh(rho)[0]
    if low < -atol:
        warnings.warn(f"reconstructed state has eigenvalue {low:.4g}; input data are unphysical",
                      RuntimeWarning, stacklevel=2)
    # the warning above reports unphysical data; the matrix is still returned
    return QubitDensityMatrix(rho, atol=max(1e-10, -low))


def _sqrtm_psd(m):
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ``[Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2``."""
    a, b = np.asarray(rho, dtype=complex), np.asarray(sigma, dtype=complex)
    r = _sqrtm_psd(a)
    w = np.linalg.eigvalsh(0.5 * ((r @ b @ r) + (r @ b @ r).conj().T))
    f = float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)
    return min(max(f, 0.0), 1.0)

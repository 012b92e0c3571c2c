"""Single-photon scattering off the hybrid system: excitation and transmission.

Every frequency argument here is the photon-cavity detuning
``delta_k = omega_k - omega_c``; energies are stored with the bare photon
energy removed (see :func:`hybridoms.ladder.total_energy_offset`).
"""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import peaks as _peaks
from .ladder import GROUND_LABEL, DressedLabel, total_energy_offset
from .overlaps import OverlapMatrix, overlap_matrix
from .params import DerivedParams, SystemParams, derive_params


class TruncationWarning(UserWarning):
    """The finite dressed ladder visibly limits the accuracy of a result."""


def fingerprint(p: SystemParams) -> str:
    blob = json.dumps(p.to_dict(), sort_keys=True).encode()
    return hashlib.sha1(blob).hexdigest()[:12]


@dataclass(frozen=True)
class SpectrumSeries:
    """Sampled spectrum ``values(grid)`` with free-form metadata."""

    grid: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ValueError("grid and values must be 1-D arrays of equal length")
        if len(grid) > 1 and np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if np.any(values < 0):
            raise ValueError("spectrum values must be non-negative")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def peaks(self, rel_height: float = 0.0) -> list[_peaks.Peak]:
        return _peaks.find_peaks(self.grid, self.values, rel_height=rel_height)

    def highest_peak(self) -> _peaks.Peak:
        return _peaks.highest_peak(self.grid, self.values)

    def integral(self) -> float:
        from scipy.integrate import simpson
        return float(simpson(self.values, x=self.grid))

    @classmethod
    def concatenate(cls, parts, metadata=None) -> "SpectrumSeries":
        """Merge spectra sampled on disjoint, ordered windows."""
        parts = sorted(parts, key=lambda s: s.grid[0])
        return cls(np.concatenate([s.grid for s in parts]),
                   np.concatenate([s.values for s in parts]),
                   dict(metadata or {}))


@dataclass(frozen=True)
class ScatteringContext:
    """Parameters, overlaps and the zero/one-photon energy tables.

    ``e0[i]`` is the zero-photon energy of ``labels[i]``; ``e1[i]`` the
    one-photon energy minus ``omega_c``.
    """

    params: SystemParams
    derived: DerivedParams
    overlap: OverlapMatrix
    e0: np.ndarray
    e1: np.ndarray

    @classmethod
    def build(cls, params: SystemParams, n_trunc: int | None = None) -> "ScatteringContext":
        derived = derive_params(params)
        om = overlap_matrix(params, n_trunc)
        e0 = np.array([total_energy_offset(0, lab, params) for lab in om.labels])
        e1 = np.array([total_energy_offset(1, lab, params) for lab in om.labels])
        return cls(params, derived, om, e0, e1)

    @property
    def labels(self):
        return self.overlap.labels

    @property
    def n_trunc(self) -> int:
        return self.overlap.n_trunc

    @property
    def kappa(self) -> float:
        return self.params.kappa

    def index(self, label: DressedLabel) -> int:
        return self.overlap.index(label)

    def resonance(self, final: DressedLabel, initial: DressedLabel = GROUND_LABEL) -> float:
        """Detuning at which ``|0>|initial> -> |1>|final~(1)>`` is resonant."""
        return float(self.e1[self.index(final)] - self.e0[self.index(initial)])

    def emission_shift(self, final: DressedLabel, initial: DressedLabel) -> float:
        """Energy handed to the TLS-MR subsystem, ``eps_0(final) - eps_0(initial)``."""
        return float(self.e0[self.index(final)] - self.e0[self.index(initial)])


def effective_detuning(ctx: ScatteringContext, delta_k, final: DressedLabel, initial: DressedLabel):
    """``omega_k + eps_0(initial) - eps_1(final) + i kappa/2``."""
    delta_k = np.asarray(delta_k, dtype=float)
    return delta_k - ctx.resonance(final, initial) + 0.5j * ctx.kappa


def excitation_amplitude(ctx: ScatteringContext, delta_k, final: DressedLabel, initial: DressedLabel):
    """Cavity excitation amplitude into ``|1>|final~(1)>`` (``V = sqrt(kappa)``)."""
    ov = ctx.overlap.entries[ctx.index(initial), ctx.index(final)]
    return math.sqrt(ctx.kappa) * ov / effective_detuning(ctx, delta_k, final, initial)


def cavity_excitation(ctx: ScatteringContext, delta_k, initial: DressedLabel = GROUND_LABEL):
    """``sum_f |e_{f,initial}|^2`` evaluated pointwise."""
    delta_k = np.atleast_1d(np.asarray(delta_k, dtype=float))
    i = ctx.index(initial)
    ov2 = ctx.overlap.entries[i] ** 2
    det = delta_k[None, :] - (ctx.e1[:, None] - ctx.e0[i])
    return ctx.kappa * np.sum(ov2[:, None] / (det**2 + 0.25 * ctx.kappa**2), axis=0)


def _check_window(ctx: ScatteringContext, delta_k):
    reach = (ctx.n_trunc - 1) * ctx.params.omega_b
    d1 = ctx.derived.delta1
    if np.any(np.abs(np.asarray(delta_k) + d1) > reach):
        warnings.warn("detuning grid reaches beyond the truncated ladder", TruncationWarning, stacklevel=3)


def cavity_excitation_spectrum(ctx: ScatteringContext, initial: DressedLabel, grid) -> SpectrumSeries:
    _check_window(ctx, grid)
    grid = np.asarray(grid, dtype=float)
    return SpectrumSeries(grid, cavity_excitation(ctx, grid, initial),
                          {"kind": "excitation", "initial": str(initial),
                           "params": fingerprint(ctx.params)})


def tail_estimate(ctx: ScatteringContext, initial: DressedLabel) -> float:
    """Bound on the intermediate-state sum dropped by the truncation.

    ``kappa / |Delta~| <= 2``, so the missing terms are bounded by twice the
    row-norm defect of the initial state.
    """
    return 2.0 * abs(ctx.overlap.row_norm_defect()[ctx.index(initial)])


def transmission_amplitudes(ctx: ScatteringContext, delta_k, initial: DressedLabel):
    """Transmission amplitudes into every final state, shape ``(n_labels, n_points)``.

    ``t[f] = delta_{f,i} - i kappa sum_n O[f,n] O[i,n] / Delta~_{n,i}``.
    """
    delta_k = np.atleast_1d(np.asarray(delta_k, dtype=float))
    i = ctx.index(initial)
    if tail_estimate(ctx, initial) > 1e-8:
        warnings.warn(f"truncation tail for initial state {initial} exceeds 1e-8",
                      TruncationWarning, stacklevel=2)
    O = ctx.overlap.entries
    det = delta_k[None, :] - (ctx.e1[:, None] - ctx.e0[i]) + 0.5j * ctx.kappa
    t = -1j * ctx.kappa * (O @ (O[i][:, None] / det))
    t[i] += 1.0
    return t


def transmission_amplitude(ctx: ScatteringContext, delta_k, final: DressedLabel, initial: DressedLabel):
    """Single channel of :func:`transmission_amplitudes` (evaluated efficiently)."""
    delta_k = np.asarray(delta_k, dtype=float)
    scalar = delta_k.ndim == 0
    delta_k = np.atleast_1d(delta_k)
    i, f = ctx.index(initial), ctx.index(final)
    O = ctx.overlap.entries
    det = delta_k[None, :] - (ctx.e1[:, None] - ctx.e0[i]) + 0.5j * ctx.kappa
    t = -1j * ctx.kappa * np.sum((O[f] * O[i])[:, None] / det, axis=0)
    if f == i:
        t = t + 1.0
    return t[0] if scalar else t


def total_transmission(ctx: ScatteringContext, delta_k, initial: DressedLabel = GROUND_LABEL):
    """``sum_f |t_{f,initial}|^2``; equals one for lossless scattering."""
    return np.sum(np.abs(transmission_amplitudes(ctx, delta_k, initial)) ** 2, axis=0)


class PredictedPeak(NamedTuple):
    delta_k: float
    weight: float
    label: DressedLabel


def predict_excitation_peaks(ctx: ScatteringContext, initial: DressedLabel = GROUND_LABEL,
                             n_max: int = 3) -> list[PredictedPeak]:
    """Resonance positions and Franck-Condon weights for final states ``n <= n_max``."""
    if n_max > ctx.n_trunc:
        raise ValueError("n_max exceeds the ladder truncation")
    i = ctx.index(initial)
    out = []
    for lab in ctx.labels:
        if lab.n > n_max:
            continue
        out.append(PredictedPeak(ctx.resonance(lab, initial),
                                 float(ctx.overlap.entries[i, ctx.index(lab)] ** 2), lab))
    return sorted(out)


def peak_windows(centers, half_width: float, points: int = 2001):
    """Uniform grids of ``points`` samples over ``center +/- half_width``."""
    return [np.linspace(c - half_width, c + half_width, points) for c in centers]


def excitation_peak_scan(ctx: ScatteringContext, initial: DressedLabel = GROUND_LABEL, n_max: int = 2,
                         points: int = 2001, width: float | None = None) -> list[tuple]:
    """Fine scans around every predicted resonance with ``n <= n_max``.

    Each window is ``width`` wide (default ``10 kappa``). Returns
    ``(predicted, refined_peak, series)`` triples, where ``refined_peak`` is
    the parabolic-refined sample maximum nearest the prediction (or ``None``).
    """
    width = 10 * ctx.kappa if width is None else width
    out = []
    for pred in predict_excitation_peaks(ctx, initial, n_max):
        grid = np.linspace(pred.delta_k - width / 2, pred.delta_k + width / 2, points)
        series = cavity_excitation_spectrum(ctx, initial, grid)
        out.append((pred, _peaks.nearest_peak(series.peaks(), pred.delta_k), series))
    return out


def default_excitation_grid(ctx: ScatteringContext, initial: DressedLabel = GROUND_LABEL,
                            n_max: int = 3, points: int = 2001, coarse_points: int = 4001) -> np.ndarray:
    """Coarse full-range scan merged with fine ``10 kappa`` windows at every predicted line."""
    preds = predict_excitation_peaks(ctx, initial, n_max)
    lo = min(p.delta_k for p in preds) - 0.5 * ctx.params.omega_b
    hi = max(p.delta_k for p in preds) + 0.5 * ctx.params.omega_b
    pieces = [np.linspace(lo, hi, coarse_points)]
    pieces += peak_windows([p.delta_k for p in preds], 5 * ctx.kappa, points)
    return np.unique(np.concatenate(pieces))

"""Transmitted single-photon spectra for Gaussian wave packets.

The photon enters with spectral amplitude ``f(omega)``; after scattering the
TLS-MR subsystem ends in ``|n xi>`` and the photon frequency is lowered by the
energy handed to the subsystem. The transmitted spectrum sums these channels.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .ladder import GROUND_LABEL, MINUS, PLUS, DressedLabel, dressed_state
from .qubit import as_density_matrix
from .scattering import ScatteringContext, SpectrumSeries, fingerprint, transmission_amplitude

#: Gaussian tails are dropped beyond this many widths from the pulse centre.
SUPPORT_WIDTHS = 8.0


class NormalizationWarning(UserWarning):
    """Integrated transmitted probability falls short of one."""


@dataclass(frozen=True)
class PulseSpec:
    """Gaussian wave packet ``(2/(pi d^2))^(1/4) exp[-(omega - omega0)^2 / d^2]``."""

    omega0: float
    d: float

    def __post_init__(self):
        if not self.d > 0:
            raise ValueError("pulse width d must be positive")

    @classmethod
    def at_detuning(cls, params, delta0: float, d: float) -> "PulseSpec":
        """Pulse centred at cavity detuning ``delta0``."""
        return cls(params.omega_c + delta0, d)

    def center_detuning(self, params) -> float:
        return self.omega0 - params.omega_c


def gaussian_amplitude(pulse: PulseSpec, omega):
    omega = np.asarray(omega, dtype=float)
    return (2.0 / (math.pi * pulse.d**2)) ** 0.25 * np.exp(-((omega - pulse.omega0) ** 2) / pulse.d**2)


def _gauss_detuning(pulse: PulseSpec, delta0: float, nu):
    return (2.0 / (math.pi * pulse.d**2)) ** 0.25 * np.exp(-((nu - delta0) ** 2) / pulse.d**2)


@dataclass(frozen=True)
class InitialState:
    """Pure or mixed initial state of the TLS-MR subsystem in the dressed basis.

    ``components`` is a tuple of ``(probability, amplitudes)`` pairs where
    ``amplitudes`` maps :class:`DressedLabel` to complex coefficients.
    """

    components: tuple

    def __post_init__(self):
        total = 0.0
        for weight, amps in self.components:
            if weight < 0:
                raise ValueError("mixture weights must be non-negative")
            norm = sum(abs(c) ** 2 for c in amps.values())
            if abs(norm - 1) > 1e-9:
                raise ValueError(f"amplitude vector has norm^2 {norm:.12g}, expected 1")
            total += weight
        if abs(total - 1) > 1e-9:
            raise ValueError(f"mixture weights sum to {total:.12g}, expected 1")

    @classmethod
    def pure(cls, amplitudes) -> "InitialState":
        if isinstance(amplitudes, DressedLabel):
            amplitudes = {amplitudes: 1.0}
        return cls(((1.0, dict(amplitudes)),))

    @classmethod
    def mixed(cls, pairs) -> "InitialState":
        return cls(tuple((float(w), dict(a)) for w, a in pairs))

    @property
    def is_pure(self) -> bool:
        return len(self.components) == 1


def qubit_vector_amplitudes(ctx: ScatteringContext, a: complex, b: complex) -> dict:
    """Dressed-basis amplitudes of ``(a|down> + b|up>) |0>_b``.

    ``|0>_b|up>`` is decomposed exactly as ``cos(theta_1)|1+> - sin(theta_1)|1->``.
    """
    plus = dressed_state(DressedLabel(1, PLUS), ctx.params)
    minus = dressed_state(DressedLabel(1, MINUS), ctx.params)
    amps = {GROUND_LABEL: complex(a)}
    if b != 0:
        amps[DressedLabel(1, PLUS)] = complex(b) * plus.c_up
        amps[DressedLabel(1, MINUS)] = complex(b) * minus.c_up
    return amps


def qubit_initial_state(ctx: ScatteringContext, rho) -> InitialState:
    """Diagonalise a qubit density matrix into a mixture of dressed superpositions."""
    rho = as_density_matrix(rho)
    weights, vecs = rho.eigensystem()
    pairs = [(w, qubit_vector_amplitudes(ctx, vecs[0, u], vecs[1, u]))
             for u, w in enumerate(weights) if w > 1e-15]
    total = sum(w for w, _ in pairs)
    return InitialState.mixed([(w / total, a) for w, a in pairs])


def _channel_terms(ctx: ScatteringContext, pulse: PulseSpec, amps: dict, delta_k: np.ndarray):
    """Yield the per-final-state amplitude arrays of a pure initial state."""
    delta0 = pulse.center_detuning(ctx.params)
    reach = SUPPORT_WIDTHS * pulse.d
    lo, hi = delta_k[0], delta_k[-1]
    for final in ctx.labels:
        term = None
        for initial, c in amps.items():
            if c == 0:
                continue
            shift = ctx.emission_shift(final, initial)
            # nu = delta_k + shift must come within reach of the pulse centre
            if hi + shift < delta0 - reach or lo + shift > delta0 + reach:
                continue
            nu = delta_k + shift
            amp = c * _gauss_detuning(pulse, delta0, nu) * transmission_amplitude(ctx, nu, final, initial)
            term = amp if term is None else term + amp
        if term is not None:
            yield final, term


def _pure_spectrum(ctx, pulse, amps, delta_k):
    out = np.zeros(len(delta_k))
    for _, term in _channel_terms(ctx, pulse, amps, delta_k):
        out += np.abs(term) ** 2
    return out


def _warn_pulse(ctx, pulse):
    if pulse.d > 0.1 * ctx.params.omega_b:
        warnings.warn("pulse width is not small compared with omega_b; sidebands overlap", stacklevel=3)


def transmission_spectrum(ctx: ScatteringContext, pulse: PulseSpec, initial, grid,
                          check_norm: bool = True) -> SpectrumSeries:
    """Probability density of the transmitted photon versus cavity detuning.

    ``initial`` is an :class:`InitialState`, a label, or a label->amplitude
    mapping. With ``check_norm`` a :class:`NormalizationWarning` is raised
    when the grid captures less than 0.999 of the photon.
    """
    _warn_pulse(ctx, pulse)
    if not isinstance(initial, InitialState):
        initial = InitialState.pure(initial)
    grid = np.asarray(grid, dtype=float)
    values = np.zeros(len(grid))
    for weight, amps in initial.components:
        values += weight * _pure_spectrum(ctx, pulse, amps, grid)
    series = SpectrumSeries(grid, values, {"kind": "transmission", "params": fingerprint(ctx.params),
                                           "omega0": pulse.omega0, "d": pulse.d})
    if check_norm and len(grid) > 2:
        captured = series.integral()
        if captured < 0.999:
            warnings.warn(f"grid captures only {captured:.6f} of the transmitted photon",
                          NormalizationWarning, stacklevel=2)
    return series


def mixed_state_spectrum(ctx: ScatteringContext, pulse: PulseSpec, rho_tls, grid,
                         check_norm: bool = True) -> SpectrumSeries:
    """Transmission spectrum for the TLS in ``rho_tls`` and the mechanics in vacuum."""
    return transmission_spectrum(ctx, pulse, qubit_initial_state(ctx, rho_tls), grid, check_norm)


def _merge(intervals):
    intervals = sorted(intervals)
    merged = [list(intervals[0])]
    for lo, hi in intervals[1:]:
        if lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return merged


def channel_probabilities(ctx: ScatteringContext, pulse: PulseSpec, initial,
                          samples_per_width: int = 40) -> dict:
    """Integrated transmitted probability into each final TLS-MR state.

    Each channel is integrated over its own support (Simpson rule), so the
    result does not depend on a user grid. Summed over channels this is the
    total probability, which is one for a lossless system.
    """
    if not isinstance(initial, InitialState):
        initial = InitialState.pure(initial)
    delta0 = pulse.center_detuning(ctx.params)
    reach = SUPPORT_WIDTHS * pulse.d
    step = min(pulse.d, ctx.kappa) / samples_per_width
    probs: dict = {}
    for weight, amps in initial.components:
        for final in ctx.labels:
            spans = [(delta0 - ctx.emission_shift(final, i) - reach,
                      delta0 - ctx.emission_shift(final, i) + reach)
                     for i, c in amps.items() if c != 0]
            total = 0.0
            for lo, hi in _merge(spans):
                npts = int(math.ceil((hi - lo) / step)) | 1
                grid = np.linspace(lo, hi, max(npts, 5))
                vals = np.zeros(len(grid))
                for f, term in _channel_terms(ctx, pulse, amps, grid):
                    if f == final:
                        vals = np.abs(term) ** 2
                total += simpson(vals, x=grid)
            probs[final] = probs.get(final, 0.0) + weight * total
    return probs


def total_probability(ctx: ScatteringContext, pulse: PulseSpec, initial) -> float:
    """``integral S(delta_k) d delta_k`` evaluated channel by channel."""
    return float(sum(channel_probabilities(ctx, pulse, initial).values()))


def default_transmission_window(ctx: ScatteringContext, n_show: int = 3):
    """``[-delta1 - delta2 - (n_show + 1/2) omega_b, 5 kappa]``."""
    d = ctx.derived
    return (-d.delta1 - d.delta2 - (n_show + 0.5) * ctx.params.omega_b, 5 * ctx.kappa)


def window_points(lo: float, hi: float, resolution: float, per_width: int = 10) -> int:
    return int(math.ceil((hi - lo) / resolution * per_width)) + 1


def predicted_lines(ctx: ScatteringContext, pulse: PulseSpec, initial) -> list[float]:
    """Detunings where a narrow pulse would reappear, one per (initial, final) pair."""
    if not isinstance(initial, InitialState):
        initial = InitialState.pure(initial)
    delta0 = pulse.center_detuning(ctx.params)
    lines = set()
    for _, amps in initial.components:
        for i, c in amps.items():
            if c == 0:
                continue
            for f in ctx.labels:
                lines.add(round(delta0 - ctx.emission_shift(f, i), 12))
    return sorted(lines)


def default_transmission_grid(ctx: ScatteringContext, pulse: PulseSpec, initial, n_show: int = 3,
                              points: int = 2001, coarse_points: int = 4001) -> np.ndarray:
    """Coarse scan of the default window plus fine windows at every predicted line.

    Fine windows span ``10 max(kappa, d)`` with ``points`` samples each. An
    excited initial state can hand energy to the photon, so the upper edge is
    raised to cover any predicted line above the default window.
    """
    lo, hi = default_transmission_window(ctx, n_show)
    half = 5 * max(ctx.kappa, pulse.d)
    lines = predicted_lines(ctx, pulse, initial)
    hi = max(hi, max(lines) + half)
    pieces = [np.linspace(lo, hi, coarse_points)]
    for x in lines:
        if lo - half <= x <= hi + half:
            pieces.append(np.linspace(x - half, x + half, points))
    return np.unique(np.concatenate(pieces))

"""Physical parameters of the hybrid optomechanical system.

Units: hbar = 1, waveguide group velocity = 1, and frequencies are quoted in
units of the mechanical frequency (omega_b = 1 by default). With these
conventions the cavity-waveguide coupling is ``V = sqrt(kappa)``.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass, fields
from pathlib import Path


class ValidityWarning(UserWarning):
    """Parameters lie outside the regime where the analytic solution is reliable."""


@dataclass(frozen=True)
class SystemParams:
    """Raw frequencies, couplings, decay rates and thermal occupations.

    Parameters
    ----------
    omega_c : float
        Cavity frequency.
    omega_b : float
        Mechanical frequency (the canonical unit).
    omega_a : float
        Two-level-system transition frequency.
    g : float
        Single-photon optomechanical coupling.
    lam : float
        TLS-MR Jaynes-Cummings coupling (``lambda`` in config files).
    kappa : float
        Cavity-waveguide decay rate.
    gamma_a, gamma_b : float
        TLS decay and mechanical damping (only used by the master equation).
    n_a, n_b : float
        Thermal Bose occupations of the TLS and the mechanics.
    """

    omega_c: float = 10.0
    omega_b: float = 1.0
    omega_a: float = 1.0
    g: float = 1.2
    lam: float = 0.05
    kappa: float = 0.01
    gamma_a: float = 0.0
    gamma_b: float = 0.0
    n_a: float = 0.0
    n_b: float = 0.0

    def __post_init__(self):
        for name in ("omega_c", "omega_b", "omega_a", "kappa"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        # zero couplings are allowed so the decoupled limits can be evaluated
        for name in ("g", "lam", "gamma_a", "gamma_b", "n_a", "n_b"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be non-negative, got {value!r}")
        if self.kappa >= self.omega_b:
            warnings.warn(
                f"kappa={self.kappa} >= omega_b={self.omega_b}: sidebands are not resolved",
                ValidityWarning,
                stacklevel=3,
            )

    @property
    def delta_ab(self) -> float:
        return self.omega_a - self.omega_b

    def replace(self, **changes) -> "SystemParams":
        """Copy with some fields changed (``lambda`` is accepted as an alias of ``lam``)."""
        if "lambda" in changes:
            changes["lam"] = changes.pop("lambda")
        data = asdict(self)
        data.update(changes)
        return SystemParams(**data)

    def to_dict(self) -> dict:
        """Config-file representation (uses the key ``lambda``)."""
        data = asdict(self)
        data["lambda"] = data.pop("lam")
        return {key: data[key] for key in CONFIG_KEYS}

    @classmethod
    def from_dict(cls, data: dict) -> "SystemParams":
        """Build from a config mapping, rejecting unknown or missing keys."""
        if not isinstance(data, dict):
            raise ValueError("config must be a JSON object")
        unknown = set(data) - set(CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        missing = set(CONFIG_KEYS) - set(data)
        if missing:
            raise ValueError(f"missing config keys: {sorted(missing)}")
        values = {}
        for key in CONFIG_KEYS:
            value = data[key]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"config key {key!r} must be a number, got {value!r}")
            values["lam" if key == "lambda" else key] = float(value)
        return cls(**values)

    @classmethod
    def from_json(cls, path) -> "SystemParams":
        with open(Path(path)) as fh:
            return cls.from_dict(json.load(fh))


CONFIG_KEYS = (
    "omega_c", "omega_b", "omega_a", "g", "lambda",
    "kappa", "gamma_a", "gamma_b", "n_a", "n_b",
)

assert {f.name for f in fields(SystemParams)} == {
    "lam" if k == "lambda" else k for k in CONFIG_KEYS
}


@dataclass(frozen=True)
class DerivedParams:
    """Transformation parameters and cavity frequency shifts.

    ``beta`` is the photon-induced mechanical displacement, ``alpha`` the
    photon-induced TLS rotation angle, ``delta1`` the radiation-pressure shift
    of the cavity and ``delta2`` the extra shift mediated by the TLS.
    """

    beta: float
    alpha: float
    delta1: float
    delta2: float
    delta_ab: float
    alpha_large: bool = False
    lambda_large: bool = False

    @property
    def valid(self) -> bool:
        return not (self.alpha_large or self.lambda_large)


def derive_params(p: SystemParams) -> DerivedParams:
    """Compute beta, alpha, delta1, delta2 and the TLS-MR detuning.

    Flags (and warns) when ``alpha > 0.1`` or when ``lambda`` exceeds a tenth
    of ``min(omega_a, omega_b)``; both degrade the perturbative spectrum.
    """
    beta = p.g / p.omega_b
    alpha = beta * p.lam / p.omega_a
    delta1 = beta * p.g
    delta2 = alpha * beta * p.lam
    alpha_large = alpha > 0.1
    lambda_large = p.lam >= min(p.omega_a, p.omega_b) / 10
    if alpha >= 1:
        raise ValueError(f"alpha = {alpha:.3g} >= 1; the small-rotation expansion is meaningless")
    if alpha_large or lambda_large:
        warnings.warn(
            f"perturbative regime degraded (alpha={alpha:.3g}, lambda={p.lam:.3g})",
            ValidityWarning,
            stacklevel=2,
        )
    return DerivedParams(
        beta=beta,
        alpha=alpha,
        delta1=delta1,
        delta2=delta2,
        delta_ab=p.delta_ab,
        alpha_large=alpha_large,
        lambda_large=lambda_large,
    )


def mixing_angle(n: int, lam: float, delta_ab: float) -> float:
    """Dressed-state mixing angle theta_n of the n-excitation TLS-MR doublet.

    Defined by ``tan(2 theta_n) = 2 lam sqrt(n) / delta_ab`` with ``2 theta_n``
    taken in ``[0, pi)``, so that the ``+`` branch is always the upper level.
    """
    if n < 1:
        raise ValueError("mixing angle is defined for n >= 1 only")
    if lam < 0:
        raise ValueError("lam must be non-negative")
    return 0.5 * math.atan2(2.0 * lam * math.sqrt(n), delta_ab) if (lam or delta_ab) else math.pi / 4

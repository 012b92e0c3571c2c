"""Single-photon scattering spectra of a cavity optomechanical system whose
mechanical resonator is coupled to a two-level system."""

from .ladder import GROUND_LABEL, DressedLabel
from .overlaps import overlap_matrix
from .params import DerivedParams, SystemParams, ValidityWarning, derive_params, mixing_angle
from .pulse import InitialState, PulseSpec, mixed_state_spectrum, transmission_spectrum
from .qubit import QubitDensityMatrix
from .scattering import ScatteringContext, SpectrumSeries, cavity_excitation_spectrum

__version__ = "0.1.0"

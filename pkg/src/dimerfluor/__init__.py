"""Driven, dipole-coupled emitter pairs: steady states, fluorescence and distance estimation."""
from .errors import (
    ConfigError,
    DegenerateGeometryError,
    DimerError,
    NonUniqueSteadyStateError,
    NumericalError,
    SingularResolventError,
)
from .params import SystemParams, coupling_from_distance, mixing_angle, params_from_beta
from .lindblad import build_hamiltonian, build_liouvillian, steady_state, to_collective_basis
from .effective import combined_steady, model1p_steady, model2p_steady, two_photon_rabi
from .observables import g2_zero, intensity_effective, intensity_exact, visibility_crossover
from .spectrum import detect_peaks, dressed_ladder, rf_spectrum, spectral_function
from .spectrum import strong_driving_eigensystem
from .estimation import fisher_information, fisher_map, poisson_count_prob

__version__ = "0.1.0"

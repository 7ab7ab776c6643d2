"""Precision limits for measuring the Schwarzschild radius with lossy Gaussian light pulses."""
from .bounds import (
    BoundQuery,
    RayleighLink,
    evaluate_bound,
    limit_coherent_rect,
    limit_fully_squeezed_gaussian,
    limit_fully_squeezed_rect,
    measurements_from_sigma,
    optimal_coherent_gaussian_bound,
    optimal_epsilon_gaussian,
    optimize_epsilon,
    rayleigh_transmission,
    rel_error_bound,
    squeeze_db_to_r,
    sweep_altitude,
)
from .channel import ChannelConfig, propagate, qfi_coherent_thermal, qfi_squeezed_coherent
from .errors import BoundDivergenceError, ConvergenceError, DomainError, KinkError
from .gaussian_core import GaussianProbe, QuadPair, fidelity, qfi_numeric
from .mode_splitter import ModeVector, apply_mode_bs, commutator, make_input
from .overlap import GeoConfig, ProfileSpec, overlap, redshift_delta, sensitivity

__version__ = "0.1.0"

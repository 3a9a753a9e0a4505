"""Entanglement, classical correlation and quantum discord of two-qubit X states."""
from .channels import apply_phase_flip, detect_events, p_of_time, sweep_dynamics
from .correlations import (
    CorrelationReport,
    classical_correlation,
    concurrence,
    correlation_report,
    mutual_information,
    quantum_discord,
)
from .measurement_oracle import discord_oracle, optimize_measurement
from .state_core import XStateParams, build_density_matrix, x_spectrum

__version__ = "0.1.0"

__all__ = [
    "XStateParams",
    "CorrelationReport",
    "build_density_matrix",
    "x_spectrum",
    "concurrence",
    "mutual_information",
    "classical_correlation",
    "quantum_discord",
    "correlation_report",
    "optimize_measurement",
    "discord_oracle",
    "apply_phase_flip",
    "p_of_time",
    "sweep_dynamics",
    "detect_events",
]

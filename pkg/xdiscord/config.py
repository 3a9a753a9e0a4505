"""Configuration for the X-state discord toolkit."""
import os
from dataclasses import dataclass
from dotenv import load_dotenv

# Load environment variables (server bind settings and log level only)
load_dotenv()


@dataclass
class XDiscordConfig:
    """Numerical defaults and HTTP server settings.

    Numerical fields are plain constants so results never depend on the
    environment. Only the API bind address and log verbosity come from
    ``.env`` / the process environment.
    """

    # Physicality
    physical_tol: float = 1e-12
    radicand_tol: float = 1e-12

    # Measurement oracle
    oracle_grid_n: int = 64
    oracle_refine_depth: int = 8
    oracle_exception_margin: float = 1e-4

    # Dynamics
    sweep_samples: int = 1001
    event_tol_p: float = 1e-6

    # Level surfaces
    surface_grid_n: int = 96
    surface_edge_tol: float = 1e-4

    # Output
    output_significant_digits: int = 12

    # HTTP API
    api_host: str = os.getenv("XDISCORD_API_HOST", "0.0.0.0")
    api_port: int = int(os.getenv("PORT", "5000"))
    api_max_grid_n: int = int(os.getenv("XDISCORD_API_MAX_GRID_N", "64"))

    # Logging
    log_level: str = os.getenv("LOG_LEVEL", "INFO")

    def validate(self):
        """Validate settings."""
        problems = []
        if self.oracle_grid_n < 8:
            problems.append(f"oracle_grid_n={self.oracle_grid_n} (must be >= 8)")
        if self.oracle_refine_depth < 0:
            problems.append(f"oracle_refine_depth={self.oracle_refine_depth} (must be >= 0)")
        if self.sweep_samples < 2:
            problems.append(f"sweep_samples={self.sweep_samples} (must be >= 2)")
        if self.surface_grid_n < 8:
            problems.append(f"surface_grid_n={self.surface_grid_n} (must be >= 8)")
        if self.api_max_grid_n < 8:
            problems.append(f"api_max_grid_n={self.api_max_grid_n} (must be >= 8)")
        if not 1 <= self.api_port <= 65535:
            problems.append(f"api_port={self.api_port}")
        if self.log_level.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            problems.append(f"log_level={self.log_level}")

        if problems:
            raise ValueError(
                f"Invalid configuration: {', '.join(problems)}. "
                f"Please check your .env file."
            )

# Global config instance
config = XDiscordConfig()

__all__ = ["config", "XDiscordConfig"]

"""Operator builders, experiment configuration and the command-line harness."""
from .config import ExperimentConfig, commuting_config, default_config
from .experiment import execute, run_experiment
from .matrix_io import read_matrix, write_matrix
from .operators import ConfigError, OperatorSpec, build_operator

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "OperatorSpec",
    "build_operator",
    "commuting_config",
    "default_config",
    "execute",
    "read_matrix",
    "run_experiment",
    "write_matrix",
]

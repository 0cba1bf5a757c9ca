"""Implicit time stepping for a singular nonlocal phase-field system with inertia."""

from ._nlpf import (
    Config,
    ConfigError,
    NoConvergence,
    StepFailure,
    Trajectory,
    cauchy_eps,
    cauchy_h,
    kappa,
    max_step,
    run,
    yosida_ln,
)

__all__ = [
    "Config",
    "ConfigError",
    "NoConvergence",
    "StepFailure",
    "Trajectory",
    "cauchy_eps",
    "cauchy_h",
    "kappa",
    "max_step",
    "run",
    "yosida_ln",
]

"""Entropic quantifiers of quantum realism.

Density operators and measurement channels, a family of quantum divergences,
reality quantifiers built on them, and a property harness that checks the
resulting axioms numerically.
"""
__version__ = "0.1.0"

from . import kernels
from .channels import dilate, monitoring, phi_A, stinespring_unitary, trace_environment
from .divergences import DivergenceSpec, conditional_information, divergence, entropy, mutual_information
from .errors import RealityKitError
from .qstate import (
    DensityOperator,
    ProjectiveObservable,
    mu_state,
    partial_trace,
    random_density,
    random_observable,
    werner_state,
)
from .reality import RealityQuantifierSpec, RealityValue, irreality, reality

__all__ = [
    "__version__",
    "kernels",
    "DensityOperator",
    "ProjectiveObservable",
    "partial_trace",
    "random_density",
    "random_observable",
    "werner_state",
    "mu_state",
    "phi_A",
    "monitoring",
    "stinespring_unitary",
    "dilate",
    "trace_environment",
    "DivergenceSpec",
    "divergence",
    "entropy",
    "conditional_information",
    "mutual_information",
    "RealityQuantifierSpec",
    "RealityValue",
    "reality",
    "irreality",
    "RealityKitError",
]

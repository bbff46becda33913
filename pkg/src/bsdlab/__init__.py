"""Numerical identities for Hua operators and Poisson transforms on type I bounded symmetric domains."""

__version__ = "0.1.0"

from .domain import DomainParams, KEndo, GroupElement, make_domain  # noqa: E402
from .calculus import FDScheme, ScalarField, RadialField  # noqa: E402
from .kernels import SpectralParams, spectral_params, szego_params  # noqa: E402
from .report import Report, write_report, read_report  # noqa: E402
from .experiments import (  # noqa: E402
    ExperimentSpec,
    convergence_study,
    default_spec,
    list_experiments,
    run_all,
    run_experiment,
)

__all__ = [
    "DomainParams", "KEndo", "GroupElement", "make_domain",
    "FDScheme", "ScalarField", "RadialField",
    "SpectralParams", "spectral_params", "szego_params",
    "Report", "write_report", "read_report",
    "ExperimentSpec", "convergence_study", "default_spec", "list_experiments", "run_all", "run_experiment",
]

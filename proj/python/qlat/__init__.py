"""Finite-chain probes of asymptotic abelianness (C++ core bindings)."""

from ._core import (
    QlatError,
    __version__,
    commutation_phase,
    config_hash,
    covariance_defect,
    evolve,
    hamiltonian,
    light_cone,
    list_models,
    obstruction,
    parse_config,
    run,
    run_and_write,
    schema_version,
    verify,
    weyl_matrix,
)
from .results import SchemaError, read_csv

__all__ = [
    "QlatError",
    "SchemaError",
    "__version__",
    "commutation_phase",
    "config_hash",
    "covariance_defect",
    "evolve",
    "hamiltonian",
    "light_cone",
    "list_models",
    "obstruction",
    "parse_config",
    "read_csv",
    "run",
    "run_and_write",
    "schema_version",
    "verify",
    "weyl_matrix",
]

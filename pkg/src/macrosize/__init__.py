"""Quantum-macroscopicity toolkit.

Computes two measures of macroscopic quantumness from exact states,
thermal oscillator models, Wigner-function grids, and diffraction
statistics:

* extensive size — quantum Fisher information of a mass-weighted position
  (or momentum) observable in atomic-scale units, and
* entangled size — the same QFI normalized by the summed local variances
  of a partition, witnessing multipartite entanglement depth.
"""

from . import catalog, diffraction, fisher, measures, oscillator, quantum, wigner
from .errors import ConfigError, DomainError, MacrosizeError, TruncationError
from .measures import (
    PartitionedObservable,
    PhysicalConstants,
    SizeReport,
    constants,
    entangled_size,
    entangled_size_from_values,
    extensive_size,
    two_branch_entangled_size,
    witness_depth,
)

__version__ = "0.1.0"

__all__ = [
    "quantum",
    "fisher",
    "measures",
    "oscillator",
    "wigner",
    "diffraction",
    "catalog",
    "constants",
    "PhysicalConstants",
    "PartitionedObservable",
    "SizeReport",
    "extensive_size",
    "entangled_size",
    "entangled_size_from_values",
    "two_branch_entangled_size",
    "witness_depth",
    "MacrosizeError",
    "DomainError",
    "TruncationError",
    "ConfigError",
    "__version__",
]

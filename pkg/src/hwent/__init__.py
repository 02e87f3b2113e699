"""Entanglement criteria from Heisenberg-Weyl correlation tensors.

Modules:

* :mod:`hwent.hw_basis` builds the HW observable basis of one qudit.
* :mod:`hwent.states` holds density matrices, families and random states.
* :mod:`hwent.correlations` extracts correlation tensors and reconstructs states.
* :mod:`hwent.criteria` assembles S-matrices and evaluates separability bounds.
* :mod:`hwent.verify` provides slow independent oracles and a PPT comparator.
* :mod:`hwent.sweep` scans families and bisects detection thresholds.
"""

from .correlations import CorrelationData, extract, reconstruct
from .criteria import CriterionReport, evaluate_all, trace_norm
from .errors import CriterionInapplicable, HWEntError, InputError, NumericalError
from .hw_basis import basis_set, hw_observable
from .states import DensityMatrix, family, ghz

__version__ = "0.1.0"

__all__ = [
    "CorrelationData",
    "CriterionInapplicable",
    "CriterionReport",
    "DensityMatrix",
    "HWEntError",
    "InputError",
    "NumericalError",
    "basis_set",
    "evaluate_all",
    "extract",
    "family",
    "ghz",
    "hw_observable",
    "reconstruct",
    "trace_norm",
]

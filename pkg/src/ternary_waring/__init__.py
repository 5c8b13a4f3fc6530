"""Constructive power sum decompositions of ternary forms.

Every ternary form of degree ``d`` is written as a weighted sum of at most
``floor((d^2 + 6d + 1) / 4)`` d-th powers of linear forms, and each result
comes with a certificate (residual, count, bound, catalecticant lower bound).
"""
from .binary import (apolar_component, binary_length, decompose_from_apolar,
                     is_squarefree, roots, sylvester_min_decompose)
from .certify import (Certificate, CertificationFailed, Reject, bounds_table,
                      rank_lower_bound, upper_bound, verify_decomposition)
from .decomposer import (DecomposerConfig, DecompositionResult, LevelState, LineSystem,
                         choose_lines, decompose_ternary, is_power, level_step)
from .errors import (GenericChoiceFailed, Inconsistent, InvariantViolation, PowerInput,
                     PreconditionViolated, RetryBudgetExhausted, WaringError, ZeroForm)
from .estimators import SylvesterDecomposer, WaringDecomposer
from .forms import (BinaryChart, Form, WeightedDecomposition, apolar_apply,
                    catalecticant, diff_linear, evaluate, power, restrict_to_binary,
                    variables)
from .io import form_from_json, form_to_json, read_form, write_form
from .validation import check_form, check_seed

__version__ = "0.1.0"

__all__ = [
    "BinaryChart", "Certificate", "CertificationFailed", "DecomposerConfig",
    "DecompositionResult", "Form", "GenericChoiceFailed", "Inconsistent",
    "InvariantViolation", "LevelState", "LineSystem", "PowerInput", "PreconditionViolated",
    "Reject", "RetryBudgetExhausted", "SylvesterDecomposer", "WaringDecomposer",
    "WaringError", "WeightedDecomposition", "ZeroForm", "apolar_apply", "apolar_component",
    "binary_length", "bounds_table", "catalecticant", "check_form", "check_seed",
    "choose_lines", "decompose_from_apolar", "decompose_ternary", "diff_linear",
    "evaluate", "form_from_json", "form_to_json", "is_power", "is_squarefree",
    "level_step", "power", "rank_lower_bound", "read_form", "restrict_to_binary", "roots",
    "sylvester_min_decompose", "upper_bound", "variables", "verify_decomposition",
    "write_form",
]

"""Generalized Hilbert operators induced by measures on [0, 1)."""

from __future__ import annotations

from .errors import (
    BudgetExhaustedError,
    ConvergenceError,
    DomainError,
    KernelOverflowError,
    MeasureParseError,
    MeasureValidationError,
)
from .measure import (
    Atom,
    BetaComponent,
    Divergent,
    Finite,
    Measure,
    atom_measure,
    c_constant,
    c_constant_inf,
    lebesgue,
    parse_measure,
    serialize_measure,
)
from .operator import (
    apply,
    apply_tail_bounded,
    build_section,
    inf_norm_check,
    lower_bound_sweep,
    norm_report,
    rayleigh_ratio,
    two_norm_section,
)
from .spaces import INF, W1, W2, W1Bar, W2Bar, WeightedSequence, p_norm
from .special_fn import OperatorParams, kernel, log_kernel

__version__ = "0.1.0"

"""Stopping-time computation and residue-class sieving for the 3n+1 map."""

from .affine import (
    AffineTerm,
    EventuallyTerminal,
    NotTerminal,
    Parity,
    ResidueClass,
    Terminal,
    check_terminal,
    parity,
    split_on_parity,
    step,
)
from .core import (
    BACKEND,
    SequenceSummary,
    StoppingData,
    VerifyReport,
    collatz_step,
    peak,
    pso,
    summarize,
    trajectory,
    tso,
    verify_range,
)
from .errors import (
    BudgetExceeded,
    BudgetMismatch,
    MismatchFound,
    UndeterminedParityError,
)
from .sieve import (
    CoverageLedger,
    SieveNode,
    SieveResult,
    coverage,
    leaf_cross_check,
    sieve,
    subtree_similarity,
)

__version__ = "0.1.0"

__all__ = [
    "AffineTerm",
    "BACKEND",
    "BudgetExceeded",
    "BudgetMismatch",
    "CoverageLedger",
    "EventuallyTerminal",
    "MismatchFound",
    "NotTerminal",
    "Parity",
    "ResidueClass",
    "SequenceSummary",
    "SieveNode",
    "SieveResult",
    "StoppingData",
    "Terminal",
    "UndeterminedParityError",
    "VerifyReport",
    "check_terminal",
    "collatz_step",
    "coverage",
    "leaf_cross_check",
    "parity",
    "peak",
    "pso",
    "sieve",
    "split_on_parity",
    "step",
    "subtree_similarity",
    "summarize",
    "trajectory",
    "tso",
    "verify_range",
]

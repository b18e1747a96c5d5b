"""Satisfiability and validity solver for non-iterative modal logics.

The solver decides formulas of K, T, the conditional logics CK / CK+ID /
CK+MP, the logic of agency, graded-counting logics (plain, reflexive,
half-loop), and probabilistic logic (plain, stationary), building a shallow
witness model for every SAT verdict and re-checking it independently.
"""

from .errors import (
    CosatError,
    InternalCheckError,
    LogicMismatchError,
    ModelFormatError,
    ParseError,
    ResourceLimitError,
    UnknownAtomError,
)
from .formula import Formula, analyze, parse, rank, render
from .logics import LOGIC_IDS, LogicConfig, get_logic
from .solver import SatResult, sat, valid
from .witness import ShallowModel, deserialize, model_check, serialize, verify

__all__ = [
    "CosatError",
    "Formula",
    "InternalCheckError",
    "LOGIC_IDS",
    "LogicConfig",
    "LogicMismatchError",
    "ModelFormatError",
    "ParseError",
    "ResourceLimitError",
    "SatResult",
    "ShallowModel",
    "UnknownAtomError",
    "analyze",
    "deserialize",
    "get_logic",
    "model_check",
    "parse",
    "rank",
    "render",
    "sat",
    "serialize",
    "valid",
    "verify",
]

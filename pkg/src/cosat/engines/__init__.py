"""One-step engines, one module per logic family."""

from .kripke import KripkeEngine, KripkeStructure
from .conditional import CondEngine, CondStructure
from .agency import AgencyEngine, AgencyStructure, BOT, STAR, TOP
from .counting import CountEngine, CountStructure
from .probability import ProbEngine, ProbStructure

__all__ = [
    "AgencyEngine",
    "AgencyStructure",
    "BOT",
    "CondEngine",
    "CondStructure",
    "CountEngine",
    "CountStructure",
    "KripkeEngine",
    "KripkeStructure",
    "ProbEngine",
    "ProbStructure",
    "STAR",
    "TOP",
]

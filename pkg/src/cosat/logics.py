"""Logic-id registry: maps command-line logic names to engine configurations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .engines import AgencyEngine, CondEngine, CountEngine, KripkeEngine, ProbEngine
from .errors import ParseError
from .onestep import CARRIER, SMALL, Engine

BOTH = "both"

LOGIC_IDS = (
    "k",
    "t",
    "ck",
    "ckid",
    "ckmp",
    "agency",
    "presburger",
    "presburger-t",
    "presburger-half",
    "prob",
    "prob-stat:<rat>",
)


@dataclass
class LogicConfig:
    logic_id: str
    engine: Engine
    copointed: bool
    strategy: str
    max_ilp_box: int | None = None


def _engine_for(logic_id: str, max_ilp_box: int | None) -> Engine:
    if logic_id in ("k", "t"):
        return KripkeEngine(logic_id)
    if logic_id in ("ck", "ckid", "ckmp"):
        return CondEngine(logic_id)
    if logic_id == "agency":
        return AgencyEngine()
    if logic_id == "presburger":
        return CountEngine("plain", max_ilp_box)
    if logic_id == "presburger-t":
        return CountEngine("reflexive", max_ilp_box)
    if logic_id == "presburger-half":
        return CountEngine("half", max_ilp_box)
    if logic_id == "prob":
        return ProbEngine()
    if logic_id.startswith("prob-stat:"):
        try:
            rho = Fraction(logic_id.split(":", 1)[1])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad stationary parameter in {logic_id!r}") from None
        return ProbEngine(rho)
    raise ParseError(f"unknown logic id {logic_id!r}")


def get_logic(
    logic_id: str,
    strategy: str | None = None,
    max_ilp_box: int | None = None,
) -> LogicConfig:
    """Build a solver configuration for a logic id.

    ``strategy`` is 'small', 'carrier' or 'both' (run both and cross-check);
    by default the engine's preferred strategy is used.
    """
    engine = _engine_for(logic_id, max_ilp_box)
    if strategy is None:
        strategy = engine.preferred_strategy
    if strategy == SMALL and not engine.supports_small:
        raise ParseError(f"logic {logic_id!r} does not support the small strategy")
    if strategy == CARRIER and not engine.supports_carrier:
        raise ParseError(f"logic {logic_id!r} does not support the carrier strategy")
    if strategy == BOTH and not (engine.supports_small and engine.supports_carrier):
        raise ParseError(f"logic {logic_id!r} does not support both strategies")
    if strategy not in (SMALL, CARRIER, BOTH):
        raise ParseError(f"unknown strategy {strategy!r}")
    return LogicConfig(logic_id, engine, engine.copointed, strategy, max_ilp_box)

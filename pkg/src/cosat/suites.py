"""Embedded axiom and probe suites shared by the CLI selftest and the
acceptance tests.

Each entry is (logic id, formula text, expectation), where the expectation
is one of 'valid', 'invalid', 'sat', 'unsat'.
"""

from __future__ import annotations

from .formula import parse
from .logics import get_logic
from .solver import sat, valid

VALID, INVALID, SAT, UNSAT = "valid", "invalid", "sat", "unsat"

AXIOM_SUITE: tuple[tuple[str, str, str], ...] = (
    ("k", "[](p->q) -> ([]p -> []q)", VALID),
    ("t", "[]p -> p", VALID),
    ("k", "[]p -> p", INVALID),
    ("ckid", "(p => p)", VALID),
    ("ck", "(p => p)", INVALID),
    ("ckmp", "(p => q) -> (p -> q)", VALID),
    ("ck", "(p => q) -> (p -> q)", INVALID),
    ("agency", "~C true", VALID),
    ("agency", "~C false", VALID),
    ("agency", "(E p & E q) -> E (p & q)", VALID),
    ("agency", "E p -> p", VALID),
    ("agency", "E p -> C p", VALID),
    ("prob", "L{1*(true)>=1}", VALID),
    ("prob", "L{1*(p)>=1/2} & L{1*(~p)>=2/3}", UNSAT),
    ("presburger-t", "p -> <0>p", VALID),
    ("presburger", "p -> <0>p", INVALID),
    # satisfiable probes: witness producers for the round-trip checks
    ("agency", "E p", SAT),
    ("agency", "C p & ~E p", SAT),
    ("agency", "E p & C q & ~E q", SAT),
    ("agency", "E p & E q", SAT),
    ("t", "[]p & p & ~[]q", SAT),
    ("ckmp", "(p => q) & p & q", SAT),
    ("presburger", "#{1*(p)>2} & ~(#{1*(p)>4})", SAT),
    ("prob", "L{1*(p)>=1/3} & ~L{1*(p)>=2/3}", SAT),
)


def run_suite(strategy: str | None = None, max_ilp_box: int | None = None):
    """Yield (logic, text, expectation, passed, result) per suite entry."""
    for logic_id, text, expect in AXIOM_SUITE:
        cfg = get_logic(logic_id, strategy, max_ilp_box)
        f = parse(text, logic_id)
        if expect in (VALID, INVALID):
            got = valid(f, cfg)
            passed = got == (expect == VALID)
            yield logic_id, text, expect, passed, got
        else:
            res = sat(f, cfg)
            passed = res.satisfiable == (expect == SAT)
            yield logic_id, text, expect, passed, res

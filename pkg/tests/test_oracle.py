import pytest

from cosat.errors import CosatError, ResourceLimitError
from cosat.formula import parse, rank, render
from cosat.logics import get_logic
from cosat.oracle import (
    SearchBounds,
    bounded_model_search,
    eval_kripke,
    kripke_brute,
)
from cosat.solver import sat

from gen_formulas import corpus


def test_kripke_brute_examples():
    f = parse("~([]p -> p)", "k")
    m = kripke_brute(f, 1)
    assert m is not None and (0, 0) not in m.edges
    assert kripke_brute(f, 2, reflexive=True) is None
    assert kripke_brute(parse("[]false & <>true", "k"), 3) is None


def test_kripke_brute_returns_verified_model():
    f = parse("<>p & <>~p & []q", "k")
    m = kripke_brute(f, 3)
    assert m is not None
    assert eval_kripke(m, f, 0)


def test_kripke_brute_agrees_with_solver_small_corpus():
    for logic in ("k", "t"):
        cfg = get_logic(logic)
        for f in corpus(seed=71, logic_id=logic, count=40, max_rank=2, max_atoms=4,
                        var_names=("p", "q")):
            mine = sat(f, cfg).satisfiable
            brute = kripke_brute(f, 5, reflexive=logic == "t") is not None
            if mine and not brute:
                continue  # witness may genuinely need more than five states
            assert mine == brute, render(f)


def test_bounded_search_resource_error():
    cfg = get_logic("k")
    f = parse("[]([]p & []q & ~[]r) & ~[]p", "k")
    with pytest.raises(ResourceLimitError):
        bounded_model_search(f, cfg, SearchBounds(max_states=3))


def test_bounded_search_unsupported_logic():
    cfg = get_logic("agency")
    with pytest.raises(CosatError):
        bounded_model_search(parse("E p", "agency"), cfg, SearchBounds(max_states=50))


@pytest.mark.parametrize("logic", ["k", "t", "ckid"])
def test_bounded_search_agrees_with_solver(logic):
    cfg = get_logic(logic)
    bounds = SearchBounds(max_states=60)
    for f in corpus(seed=81, logic_id=logic, count=15, max_rank=2, max_atoms=3,
                    var_names=("p", "q"), depth_budget=3):
        mine = sat(f, cfg).satisfiable
        brute = bounded_model_search(f, cfg, bounds) is not None
        assert mine == brute, render(f)

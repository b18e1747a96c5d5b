import itertools

import pytest

from cosat.engines import KripkeEngine, KripkeStructure
from cosat.formula import And, BoxOp, Not, Or
from cosat.onestep import CARRIER, SMALL, ClauseAtom
from cosat.oracle import onestep_brute

from engine_tools import A, B, carrier2, check, clauses_over, ext, signed


def box(sign, carrier, phi):
    return ClauseAtom(sign, BoxOp(), (ext(carrier, phi),))


def test_check_structure_t_needs_loop():
    eng = KripkeEngine("t")
    c = carrier2(designated=frozenset([A]))
    assert not eng.check_structure(KripkeStructure(frozenset()), c.class_set, c.designated)
    assert eng.check_structure(
        KripkeStructure(frozenset([frozenset([A])])), c.class_set, c.designated
    )
    k = KripkeEngine("k")
    assert k.check_structure(KripkeStructure(frozenset()), c.class_set, None)


def test_eval_atom():
    eng = KripkeEngine("k")
    c = carrier2()
    e = ext(c, A)
    assert eng.eval_atom(KripkeStructure(frozenset()), c.class_set, None, BoxOp(), (e,))
    assert eng.eval_atom(
        KripkeStructure(frozenset([frozenset([A])])), c.class_set, None, BoxOp(), (e,)
    )
    assert not eng.eval_atom(
        KripkeStructure(frozenset([frozenset()])), c.class_set, None, BoxOp(), (e,)
    )


def test_sat_examples():
    eng = KripkeEngine("k")
    c = carrier2()
    m = eng.sat((box(True, c, A),), c, CARRIER)
    assert m.structure.succ == ext(c, A)

    assert eng.sat((box(True, c, A), box(False, c, A)), c, CARRIER) is None

    m = eng.sat((box(False, c, A), box(False, c, B)), c, SMALL)
    assert m is not None and len(m.structure.succ) <= 2

    t = KripkeEngine("t")
    ct = carrier2(designated=frozenset())
    assert t.sat((box(True, ct, A),), ct, SMALL) is None


def test_small_bound_on_random_clauses():
    eng = KripkeEngine("k")
    c = carrier2()
    args = [A, B, Not(A), And(A, B), Or(A, B)]
    pool = signed([(BoxOp(), (x,)) for x in args], c)
    for clause in clauses_over(pool, 3):
        m = eng.sat(clause, c, SMALL)
        if m is not None:
            negs = sum(1 for a in clause if not a.sign)
            assert len(m.carrier.classes) <= negs
            assert check(eng, m, clause)


@pytest.mark.parametrize("variant", ["k", "t"])
def test_small_and_carrier_agree_exhaustively(variant):
    eng = KripkeEngine(variant)
    args = [A, B, Not(A), And(A, B)]
    designations = [frozenset(), frozenset([A]), frozenset([A, B])] if variant == "t" else [None]
    for designated in designations:
        c = carrier2(designated=designated)
        pool = signed([(BoxOp(), (x,)) for x in args], c)
        for clause in clauses_over(pool, 3):
            small = eng.sat(clause, c, SMALL)
            wide = eng.sat(clause, c, CARRIER)
            assert (small is None) == (wide is None)
            for m in (small, wide):
                if m is not None:
                    assert check(eng, m, clause)


@pytest.mark.parametrize("variant", ["k", "t"])
def test_agrees_with_brute_force(variant):
    eng = KripkeEngine(variant)
    args = [A, B, Not(A), And(A, B)]
    designations = [frozenset(), frozenset([A])] if variant == "t" else [None]
    for designated in designations:
        c = carrier2(designated=designated)
        pool = signed([(BoxOp(), (x,)) for x in args], c)
        for clause in clauses_over(pool, 3):
            mine = eng.sat(clause, c, SMALL)
            brute = onestep_brute(eng, clause, c)
            assert (mine is None) == (brute is None), clause

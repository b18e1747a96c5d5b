import pytest

from cosat.engines import AgencyEngine, AgencyStructure, BOT, STAR, TOP
from cosat.engines.agency import closure_eval
from cosat.formula import AgencyOp, And, Not, Or
from cosat.onestep import CARRIER, SMALL, ClauseAtom
from cosat.oracle import onestep_brute

from engine_tools import A, B, carrier2, check, clauses_over, ext, signed


def atom(sign, kind, carrier, phi):
    return ClauseAtom(sign, AgencyOp(kind), (ext(carrier, phi),))


def test_closure_eval():
    c = carrier2()
    e_a, e_b = ext(c, A), ext(c, B)
    meet = e_a & e_b
    assert closure_eval({e_a: TOP, e_b: TOP}, meet) == TOP
    assert closure_eval({}, e_a) == BOT
    assert closure_eval({e_a: STAR}, e_a) == STAR
    assert closure_eval({e_a: STAR}, e_b) == BOT


def test_closure_not_monotone_but_meet_compatible():
    c = carrier2()
    e_a, e_b = ext(c, A), ext(c, B)
    entries = {e_a: TOP}
    # a subset of a defined set need not inherit its value
    assert closure_eval(entries, e_a & e_b) == BOT
    sets = [e_a, e_b, e_a & e_b, ext(c, Or(A, B)), frozenset()]
    entries = {e_a: TOP, e_b: STAR}
    for x in sets:
        for y in sets:
            assert closure_eval(entries, x & y) >= min(
                closure_eval(entries, x), closure_eval(entries, y)
            )


def test_check_structure():
    eng = AgencyEngine()
    c = carrier2(designated=frozenset([A]))
    full = c.class_set
    e_a, e_b = ext(c, A), ext(c, B)
    assert not eng.check_structure(AgencyStructure(((full, STAR),)), full, c.designated)
    bad_top = AgencyStructure(((e_b, TOP),))  # designated not in the set
    assert not eng.check_structure(bad_top, full, c.designated)
    s = AgencyStructure(((e_a, STAR), (ext(c, Not(A)), STAR)))
    assert not eng.check_structure(s, full, c.designated)  # empty meet
    good = AgencyStructure(((e_a, TOP),))
    assert eng.check_structure(good, full, c.designated)


def test_eval_atom():
    eng = AgencyEngine()
    c = carrier2(designated=frozenset([A]))
    e_a = ext(c, A)
    top = AgencyStructure(((e_a, TOP),))
    star = AgencyStructure(((e_a, STAR),))
    empty = AgencyStructure(())
    assert eng.eval_atom(top, c.class_set, c.designated, AgencyOp("E"), (e_a,))
    assert not eng.eval_atom(star, c.class_set, c.designated, AgencyOp("E"), (e_a,))
    assert eng.eval_atom(star, c.class_set, c.designated, AgencyOp("C"), (e_a,))
    assert not eng.eval_atom(empty, c.class_set, c.designated, AgencyOp("C"), (e_a,))


def test_sat_frame_axioms():
    eng = AgencyEngine()
    c = carrier2(designated=frozenset([A]))
    true_ext = c.class_set
    assert eng.sat((ClauseAtom(True, AgencyOp("C"), (frozenset(true_ext),)),), c, SMALL) is None
    assert eng.sat((ClauseAtom(True, AgencyOp("C"), (frozenset(),)),), c, SMALL) is None
    combo = (
        atom(True, "E", c, A),
        atom(True, "E", c, B),
        atom(False, "E", c, And(A, B)),
    )
    assert eng.sat(combo, c, SMALL) is None
    sat_one = eng.sat((atom(True, "E", c, A),), c, SMALL)
    assert sat_one is not None and check(eng, sat_one, (atom(True, "E", c, A),))


def test_small_and_carrier_agree_exhaustively():
    eng = AgencyEngine()
    args = [A, B, And(A, B)]
    for designated in (frozenset(), frozenset([A]), frozenset([A, B])):
        c = carrier2(designated=designated)
        pool = signed([(AgencyOp(k), (x,)) for k in "EC" for x in args], c)
        for clause in clauses_over(pool, 3):
            small = eng.sat(clause, c, SMALL)
            wide = eng.sat(clause, c, CARRIER)
            assert (small is None) == (wide is None), clause
            for m in (small, wide):
                if m is not None:
                    assert check(eng, m, clause)
            if small is not None:
                n = len(clause)
                assert len(small.carrier.classes) <= n * n + n + 2


def test_agrees_with_brute_force():
    eng = AgencyEngine()
    args = [A, B, And(A, B)]
    for designated in (frozenset(), frozenset([A])):
        c = carrier2(designated=designated)
        pool = signed([(AgencyOp(k), (x,)) for k in "EC" for x in args], c)
        for clause in clauses_over(pool, 3):
            mine = eng.sat(clause, c, SMALL)
            brute = onestep_brute(eng, clause, c)
            assert (mine is None) == (brute is None), clause

import pytest

from cosat.engines import CondEngine, CondStructure
from cosat.formula import And, CondOp, Not
from cosat.onestep import CARRIER, SMALL, ClauseAtom
from cosat.oracle import onestep_brute

from engine_tools import A, B, carrier2, check, clauses_over, ext, signed


def cond(sign, carrier, ante, cons):
    return ClauseAtom(sign, CondOp(), (ext(carrier, ante), ext(carrier, cons)))


def test_check_structure_variants():
    c = carrier2(designated=frozenset([A]))
    e_a, e_b = ext(c, A), ext(c, B)
    ckid = CondEngine("ckid")
    inside = frozenset([frozenset([A])])
    assert ckid.check_structure(CondStructure(((e_a, inside),)), c.class_set, None)
    assert not ckid.check_structure(CondStructure(((e_a, e_b),)), c.class_set, None)
    ckmp = CondEngine("ckmp")
    bad = CondStructure(((e_a, frozenset([frozenset([A, B])])),))
    assert not ckmp.check_structure(bad, c.class_set, c.designated)


def test_eval_atom_defaults():
    c = carrier2(designated=frozenset([A]))
    e_a, e_b = ext(c, A), ext(c, B)
    empty = CondStructure(())
    ck = CondEngine("ck")
    assert ck.eval_atom(empty, c.class_set, None, CondOp(), (e_a, e_b))
    ckmp = CondEngine("ckmp")
    # undefined antecedent containing the designated point selects it
    assert not ckmp.eval_atom(empty, c.class_set, c.designated, CondOp(), (e_a, e_b))
    assert ckmp.eval_atom(empty, c.class_set, c.designated, CondOp(), (e_a, e_a))


def test_sat_examples():
    c = carrier2()
    ck = CondEngine("ck")
    m = ck.sat((cond(True, c, A, B),), c, CARRIER)
    assert m is not None and check(ck, m, (cond(True, c, A, B),))

    ckid = CondEngine("ckid")
    assert ckid.sat((cond(False, c, A, A),), c, CARRIER) is None
    assert ck.sat((cond(False, c, A, A),), c, CARRIER) is not None

    cmp_c = carrier2(designated=frozenset([A]))
    ckmp = CondEngine("ckmp")
    assert ckmp.sat((cond(True, cmp_c, A, B),), cmp_c, SMALL) is None

    combo = (
        cond(True, c, A, B),
        cond(True, c, A, Not(B)),
        cond(False, c, A, And(B, Not(B))),
    )
    assert ck.sat(combo, c, SMALL) is None


def test_cells_merge_equal_extensions():
    c = carrier2()
    ck = CondEngine("ck")
    # syntactically distinct antecedents with one extension share a cell
    same1 = cond(True, c, And(A, B), B)
    same2 = cond(False, c, Not(Not(And(A, B))), B)
    assert ext(c, And(A, B)) == ext(c, Not(Not(And(A, B))))
    assert ck.sat((same1, same2), c, CARRIER) is None


@pytest.mark.parametrize("variant", ["ck", "ckid", "ckmp"])
def test_small_and_carrier_agree_exhaustively(variant):
    eng = CondEngine(variant)
    designations = (
        [frozenset(), frozenset([A])] if variant == "ckmp" else [None]
    )
    pairs = [(x, y) for x in (A, B) for y in (A, B, And(A, B))]
    for designated in designations:
        c = carrier2(designated=designated)
        pool = signed([(CondOp(), pair) for pair in pairs], c)
        for clause in clauses_over(pool, 3):
            small = eng.sat(clause, c, SMALL)
            wide = eng.sat(clause, c, CARRIER)
            assert (small is None) == (wide is None), clause
            for m in (small, wide):
                if m is not None:
                    assert check(eng, m, clause)
                    bound = eng.small_bound(len(clause))
                    if m is small:
                        assert len(m.carrier.classes) <= bound


@pytest.mark.parametrize("variant", ["ck", "ckid", "ckmp"])
def test_agrees_with_brute_force(variant):
    eng = CondEngine(variant)
    designations = (
        [frozenset(), frozenset([A])] if variant == "ckmp" else [None]
    )
    pairs = [(x, y) for x in (A, B) for y in (A, B)]
    for designated in designations:
        c = carrier2(designated=designated)
        pool = signed([(CondOp(), pair) for pair in pairs], c)
        for clause in clauses_over(pool, 3):
            mine = eng.sat(clause, c, SMALL)
            brute = onestep_brute(eng, clause, c)
            assert (mine is None) == (brute is None), clause

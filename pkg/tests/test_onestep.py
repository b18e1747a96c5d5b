import random
from fractions import Fraction

import pytest

from cosat.engines import (
    AgencyEngine,
    CondEngine,
    CountEngine,
    CountStructure,
    KripkeEngine,
    KripkeStructure,
    ProbEngine,
    ProbStructure,
)
from cosat.errors import UnknownAtomError
from cosat.formula import And, BoxOp, CountOp, Modal, Not, Or, Var, parse
from cosat.onestep import (
    Carrier,
    ClauseAtom,
    OneStepModel,
    extension,
    model_check_clause,
    theory,
)

P, Q = Var("p"), Var("q")


def full_carrier(letters, designated=None):
    classes = []
    for mask in range(1 << len(letters)):
        classes.append(frozenset(letters[i] for i in range(len(letters)) if mask >> i & 1))
    return Carrier(tuple(letters), tuple(classes), designated)


def test_extension_basic():
    c = full_carrier([P, Q])
    assert extension(And(P, Not(Q)), c) == frozenset([frozenset([P])])
    assert extension(parse("true", "k"), c) == c.class_set
    assert len(extension(Or(P, Q), c)) == 3


def test_extension_unknown_letter():
    c = full_carrier([P])
    with pytest.raises(UnknownAtomError):
        extension(Q, c)


def test_extension_boolean_homomorphism():
    rng = random.Random(5)
    c = full_carrier([P, Q])
    from gen_formulas import corpus

    for f in corpus(seed=3, logic_id="k", count=40, max_rank=0, max_atoms=4,
                    require_modal=False, var_names=("p", "q")):
        e = extension(f, c)
        assert extension(Not(f), c) == c.class_set - e
        g = rng.choice([P, Q, And(P, Q)])
        assert extension(And(f, g), c) == e & extension(g, c)


def test_theory_roundtrip():
    c = full_carrier([P, Q])
    sigma = {P: P, Q: Q}
    for cls in c.classes:
        th = theory(cls, c.alphabet, sigma)
        assert extension(th, c) == frozenset([cls])


def test_model_check_clause_kripke():
    eng = KripkeEngine("k")
    c = full_carrier([P])
    e_p = extension(P, c)
    clause = (ClauseAtom(True, BoxOp(), (e_p,)),)
    good = OneStepModel(c, KripkeStructure(frozenset([frozenset([P])])))
    bad = OneStepModel(c, KripkeStructure(frozenset([frozenset([P]), frozenset()])))
    assert model_check_clause(eng, good, clause)
    assert not model_check_clause(eng, bad, clause)


def test_model_check_clause_counting():
    eng = CountEngine("plain")
    c = full_carrier([P])
    e_p = extension(P, c)
    m = OneStepModel(c, CountStructure(((frozenset([P]), 2),)))
    clause = (ClauseAtom(True, CountOp((1,), ">", 1), (e_p,)),)
    assert model_check_clause(eng, m, clause)


def test_clause_atom_order_irrelevant():
    eng = KripkeEngine("k")
    c = full_carrier([P, Q])
    atoms = (
        ClauseAtom(True, BoxOp(), (extension(P, c),)),
        ClauseAtom(False, BoxOp(), (extension(Q, c),)),
    )
    m = eng.sat(atoms, c, "small")
    assert m is not None
    assert model_check_clause(eng, m, _restrict(atoms, m))
    assert model_check_clause(eng, m, _restrict(tuple(reversed(atoms)), m))


def _restrict(clause, model):
    from cosat.onestep import restrict_clause

    return restrict_clause(clause, model.carrier.class_set)


def _merge_classes(points, weights=None):
    """Merging equal-assignment points must preserve every atom (tested via
    duplicate-free class carriers vs. split weights)."""


@pytest.mark.parametrize("variant", ["plain", "reflexive", "half"])
def test_class_merging_counting(variant):
    # two carrier points with the same assignment behave like one point
    # carrying the summed weight
    eng = CountEngine(variant)
    a = frozenset([P])
    b = frozenset()
    designated = a if variant != "plain" else None
    c = Carrier((P,), (b, a), designated)
    e_p = frozenset([a])
    split = CountStructure(((a, 2),), 1 if variant != "plain" else 0)
    merged = CountStructure(((a, 2),), 1 if variant != "plain" else 0)
    op = CountOp((1,), ">", 0)
    for ext in (e_p, frozenset([a, b])):
        assert eng.eval_atom(split, c.class_set, designated, op, (ext,)) == eng.eval_atom(
            merged, c.class_set, designated, op, (ext,)
        )


def test_class_merging_probability():
    eng = ProbEngine()
    a, b = frozenset([P]), frozenset()
    c = Carrier((P,), (b, a))
    # half the mass on each of two same-assignment points equals full mass
    # on the merged class
    from cosat.formula import LikelihoodOp

    op = LikelihoodOp((Fraction(1),), Fraction(1, 2))
    merged = ProbStructure(((a, Fraction(1)),))
    assert eng.eval_atom(merged, c.class_set, None, op, (frozenset([a]),))


def test_restrict_preserves_designated():
    c = full_carrier([P], designated=frozenset([P]))
    with pytest.raises(ValueError):
        c.restrict([frozenset()])

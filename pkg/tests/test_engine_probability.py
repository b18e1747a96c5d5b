from fractions import Fraction

import pytest

from cosat.engines import ProbEngine, ProbStructure
from cosat.formula import LikelihoodOp, Not, parse
from cosat.logics import get_logic
from cosat.onestep import CARRIER, SMALL, ClauseAtom
from cosat.oracle import SearchBounds, onestep_brute
from cosat.solver import sat, valid

from engine_tools import A, B, carrier2, check, clauses_over, ext, signed


def latom(sign, carrier, coeffs, bound, args):
    op = LikelihoodOp(tuple(Fraction(c) for c in coeffs), Fraction(bound))
    return ClauseAtom(sign, op, tuple(ext(carrier, a) for a in args))


def test_check_structure():
    c = carrier2(designated=frozenset([A]))
    pts = c.class_set
    eng = ProbEngine()
    half = Fraction(1, 2)
    ok = ProbStructure(((frozenset([A]), half), (frozenset(), half)))
    assert eng.check_structure(ok, pts, None)
    assert not eng.check_structure(ProbStructure(((frozenset([A]), half),)), pts, None)
    stat = ProbEngine(Fraction(1, 3))
    low = ProbStructure(((frozenset([A]), Fraction(3, 4)),), Fraction(1, 4))
    assert not stat.check_structure(low, pts, c.designated)


def test_eval_atom():
    eng = ProbEngine()
    c = carrier2()
    s = ProbStructure(((frozenset([A]), Fraction(1, 2)), (frozenset(), Fraction(1, 2))))
    op = LikelihoodOp((Fraction(1),), Fraction(1, 2))
    log = []
    assert eng.eval_atom(s, c.class_set, None, op, (ext(c, A),), visit_log=log)
    assert len(log) == len(c.classes)

    total = LikelihoodOp((Fraction(1),), Fraction(1))
    assert eng.eval_atom(s, c.class_set, None, total, (c.class_set,))

    neg = LikelihoodOp((Fraction(-1),), Fraction(0))
    zero = ProbStructure(((frozenset(), Fraction(1)),))
    assert eng.eval_atom(zero, c.class_set, None, neg, (ext(c, A),))


def test_sat_examples():
    eng = ProbEngine()
    c = carrier2()
    clash = (
        latom(True, c, (1,), "1/2", (A,)),
        latom(True, c, (1,), "2/3", (Not(A),)),
    )
    assert eng.sat(clash, c, SMALL) is None

    tautology = (latom(True, c, (1,), 1, (parse("true", "k"),)),)
    m = eng.sat(tautology, c, SMALL)
    assert m is not None and check(eng, m, tautology)

    # l(a) > 0 with an empty extension for a
    empty_c = carrier2(classes=[0])
    pos = (latom(False, empty_c, (-1,), 0, (A,)),)
    assert eng.sat(pos, empty_c, SMALL) is None


def test_mass_splits_like_total():
    eng = ProbEngine()
    c = carrier2()
    for q in (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)):
        clause = (
            latom(True, c, (1,), q, (A,)),
            latom(True, c, (1,), 1 - q, (Not(A),)),
        )
        assert eng.sat(clause, c, SMALL) is not None
        over = (
            latom(True, c, (1,), q, (A,)),
            latom(True, c, (1,), 1 - q + Fraction(1, 7), (Not(A),)),
        )
        assert eng.sat(over, c, SMALL) is None


def test_support_bound_and_strategies():
    eng = ProbEngine()
    c = carrier2()
    pool = [
        latom(sign, c, coeffs, bound, args)
        for (coeffs, bound, args) in [
            ((1,), "1/2", (A,)),
            ((1,), "1/3", (B,)),
            ((1,), 1, (parse("true", "k"),)),
            ((-1,), 0, (A,)),
        ]
        for sign in (True, False)
    ]
    for clause in clauses_over(pool, 3):
        small = eng.sat(clause, c, SMALL)
        wide = eng.sat(clause, c, CARRIER)
        assert (small is None) == (wide is None), clause
        if small is not None:
            support = sum(1 for _, m in small.structure.masses if m != 0)
            if small.structure.self_mass:
                support += 1
            assert support <= len(clause) + 2
            assert check(eng, small, clause)
            assert check(eng, wide, clause)


def test_grid_agreement_one_directional():
    eng = ProbEngine()
    c = carrier2(classes=[0, 1, 2])
    pool = [
        latom(sign, c, coeffs, bound, args)
        for (coeffs, bound, args) in [
            ((1,), "1/2", (A,)),
            ((1,), "1/3", (B,)),
            ((2, -1), 1, (A, B)),
        ]
        for sign in (True, False)
    ]
    bounds = SearchBounds(denominator_cap=6)
    for clause in clauses_over(pool, 3):
        mine = eng.sat(clause, c, SMALL)
        grid = onestep_brute(eng, clause, c, bounds)
        if grid is not None:
            assert mine is not None, clause  # grid hits imply solver hits
        if mine is None:
            assert grid is None, clause
        if mine is not None:
            assert check(eng, mine, clause)


def test_stationary_validity():
    cfg = get_logic("prob-stat:1/3")
    assert valid(parse("p -> L{1*(p)>=1/3}", "prob-stat:1/3"), cfg)
    assert not valid(parse("p -> L{1*(p)>=1/3}", "prob"), get_logic("prob"))
    assert not valid(parse("p -> L{1*(p)>=1/2}", "prob-stat:1/3"), cfg)


def test_kd_embedding_matches_serial_kripke():
    """Diamond as positive likelihood: verdicts match a brute-forced serial
    Kripke search on small formulas of one modal layer."""
    import itertools

    from cosat.formula import render
    from gen_formulas import corpus

    def serial_models(n, var_names):
        states = list(range(n))
        for edges in itertools.product([0, 1], repeat=n * n):
            rel = {
                (i, j)
                for k, (i, j) in enumerate(itertools.product(states, states))
                if edges[k]
            }
            if any(not any(x == i for x, _ in rel) for i in states):
                continue
            for bits in itertools.product([0, 1], repeat=n * len(var_names)):
                val = {}
                idx = 0
                for p in var_names:
                    val[p] = {i for i in states if bits[idx * n + i]}
                    idx += 1
                yield rel, val

    def eval_k(f, rel, val, x):
        from cosat.formula import And, BoxOp, Falsum, Iff, Implies, Modal, Not, Or, Var

        if isinstance(f, Falsum):
            return False
        if isinstance(f, Var):
            return x in val[f.name]
        if isinstance(f, Not):
            return not eval_k(f.child, rel, val, x)
        if isinstance(f, And):
            return eval_k(f.left, rel, val, x) and eval_k(f.right, rel, val, x)
        if isinstance(f, Or):
            return eval_k(f.left, rel, val, x) or eval_k(f.right, rel, val, x)
        if isinstance(f, Implies):
            return not eval_k(f.left, rel, val, x) or eval_k(f.right, rel, val, x)
        if isinstance(f, Iff):
            return eval_k(f.left, rel, val, x) == eval_k(f.right, rel, val, x)
        return all(eval_k(f.args[0], rel, val, y) for (i, y) in rel if i == x)

    def to_prob(f):
        """box f  ->  not (l(not f) > 0)  ->  L{-1*(not f) >= 0}."""
        from cosat.formula import And, BoxOp, Iff, Implies, LikelihoodOp, Modal, Not, Or

        if isinstance(f, Modal):
            inner = to_prob(f.args[0])
            return Modal(
                LikelihoodOp((Fraction(-1),), Fraction(0)), (Not(inner),)
            )
        if isinstance(f, Not):
            return Not(to_prob(f.child))
        if isinstance(f, (And, Or, Implies, Iff)):
            return type(f)(to_prob(f.left), to_prob(f.right))
        return f

    cfg = get_logic("prob")
    for f in corpus(seed=77, logic_id="k", count=30, max_rank=1, max_atoms=4,
                    var_names=("p",)):
        prob_f = to_prob(f)
        mine = sat(prob_f, cfg).satisfiable
        brute = any(
            eval_k(f, rel, val, 0)
            for n in (1, 2)
            for rel, val in serial_models(n, ("p",))
        )
        assert mine == brute, render(f)

import random

import pytest

from cosat.errors import LogicMismatchError, ParseError, UnknownAtomError
from cosat.formula import (
    And,
    BoxOp,
    CountOp,
    Falsum,
    Modal,
    Not,
    Var,
    analyze,
    atoms,
    parse,
    rank,
    render,
    size,
    skeleton_entails,
)

from gen_formulas import corpus


def test_parse_box_conjunction():
    f = parse("[]p & ~p", "k")
    assert f == And(Modal(BoxOp(), (Var("p"),)), Not(Var("p")))


def test_parse_counting_atom():
    f = parse("#{2*(p) - 1*(q) > 3}", "presburger")
    assert f == Modal(CountOp((2, -1), ">", 3), (Var("p"), Var("q")))


def test_operator_logic_mismatch():
    with pytest.raises(LogicMismatchError):
        parse("(p => q)", "t")
    with pytest.raises(LogicMismatchError):
        parse("[]p", "ck")
    with pytest.raises(LogicMismatchError):
        parse("E p", "prob")


def test_syntax_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse("p & & q", "k")
    assert err.value.pos == 4


def test_render_canonical():
    assert render(parse("[] p", "k")) == "[]p"
    assert render(parse("p & (q & r)", "k")) == "p&(q&r)"
    assert render(parse("p & q & r", "k")) == "p&q&r"
    assert render(parse("(p -> q) -> r", "k")) == "(p->q)->r"
    assert render(parse("p -> q -> r", "k")) == "p->q->r"


def test_graded_and_diamond_sugar():
    assert render(parse("<0>p", "presburger")) == "#{1*(p)>0}"
    assert render(parse("[2]p", "presburger")) == "~#{1*(~p)>2}"
    assert render(parse("<>p", "k")) == "~[]~p"
    assert render(parse("true", "k")) == "~false"


def test_congruence_parameter_validation():
    with pytest.raises(ValueError):
        CountOp((1,), "mod", 3, 2)  # residue >= modulus
    with pytest.raises(ValueError):
        CountOp((1,), "mod", 0, 0)


@pytest.mark.parametrize("logic", ["k", "ck", "agency", "presburger", "prob"])
def test_roundtrip_random_corpus(logic):
    for f in corpus(seed=1234, logic_id=logic, count=100, max_rank=4, max_atoms=12,
                    require_modal=False):
        text = render(f)
        assert parse(text, logic) == f, text


def test_rank():
    assert rank(parse("p & ~q", "k")) == 0
    assert rank(parse("[] [] false", "k")) == 2
    assert rank(parse("E (C p)", "agency")) == 2
    assert rank(Not(parse("[]p", "k"))) == rank(parse("[]p", "k"))


def test_analyze_scope():
    a = analyze(parse("[](p&q)", "k"))
    assert set(a.atoms) == {parse("[](p&q)", "k"), Var("p"), Var("q")}
    assert set(a.alphabet) == {Var("p"), Var("q")}

    a = analyze(parse("[]<>p & p", "k"))
    assert set(a.alphabet) == {parse("[]~p", "k"), Var("p")}

    a = analyze(parse("p -> q", "k"))
    assert a.alphabet == ()
    assert set(a.atoms) == {Var("p"), Var("q")}


def test_analyze_sigma_identity():
    a = analyze(parse("[]p & <>q", "k"))
    for letter in a.alphabet:
        assert a.sigma[letter] == letter


def test_skeleton_entails():
    box_p = parse("[]p", "k")
    assert skeleton_entails({box_p: True}, box_p)
    assert not skeleton_entails({box_p: True, Var("p"): False}, parse("[]p -> p", "k"))
    kx = parse("[](p->q) -> ([]p -> []q)", "k")
    signs = {
        parse("[](p->q)", "k"): True,
        parse("[]p", "k"): True,
        parse("[]q", "k"): False,
        Var("p"): False,
        Var("q"): False,
    }
    assert not skeleton_entails(signs, kx)


def test_skeleton_entails_missing_atom():
    with pytest.raises(UnknownAtomError):
        skeleton_entails({}, parse("[]p", "k"))


def test_skeleton_entails_monotone_under_consequence():
    rng = random.Random(7)
    for f in corpus(seed=99, logic_id="k", count=50, max_rank=2, max_atoms=6,
                    require_modal=False):
        signs = {a: rng.random() < 0.5 for a in atoms(f)}
        weaker = parse(f"({render(f)}) | ({render(f)})", "k")
        if skeleton_entails(signs, f):
            assert skeleton_entails(signs, weaker)


def test_size_counts_tokens_and_digits():
    assert size(Var("p")) == 1
    assert size(parse("p & q", "k")) == 3
    assert size(parse("#{1*(p)>3}", "presburger")) > size(Var("p"))

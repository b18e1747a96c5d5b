"""Formula ASTs, the concrete-syntax parser and printer, and skeleton reasoning.

The canonical text produced by :func:`render` round-trips through
:func:`parse` and doubles as the solver's memoization key, so its exact
shape (operator spelling, child order, parenthesization) is part of the
contract: formulas are never rewritten or normalized.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .errors import LogicMismatchError, ParseError, UnknownAtomError

# ---------------------------------------------------------------------------
# modal operators

@dataclass(frozen=True)
class BoxOp:
    """Necessity over successor sets ([] in logics k and t)."""

    @property
    def arity(self) -> int:
        return 1


@dataclass(frozen=True)
class CondOp:
    """Binary non-monotonic conditional, written (a => b), for the ck family."""

    @property
    def arity(self) -> int:
        return 2


@dataclass(frozen=True)
class AgencyOp:
    """Agency modality: E (brings about) or C (is capable of realising)."""

    kind: str

    def __post_init__(self):
        if self.kind not in ("E", "C"):
            raise ValueError(f"agency operator must be E or C, got {self.kind!r}")

    @property
    def arity(self) -> int:
        return 1


@dataclass(frozen=True)
class CountOp:
    """Linear counting atom  #{a1*(f1)+...+an*(fn) ~ b}  over edge weights.

    ``rel`` is one of ``<``, ``>``, ``=`` or ``mod``; for ``mod`` the atom
    asserts congruence to residue ``rhs`` modulo ``modulus``.
    """

    coeffs: tuple[int, ...]
    rel: str
    rhs: int
    modulus: int | None = None

    def __post_init__(self):
        if self.rel not in ("<", ">", "=", "mod"):
            raise ValueError(f"bad counting relation {self.rel!r}")
        if self.rel == "mod":
            if self.modulus is None or self.modulus < 1:
                raise ValueError("congruence modulus must be >= 1")
            if not 0 <= self.rhs < self.modulus:
                raise ValueError("congruence residue must satisfy 0 <= r < k")
        elif self.modulus is not None:
            raise ValueError("modulus only allowed with rel 'mod'")
        if not self.coeffs:
            raise ValueError("counting atom needs at least one term")

    @property
    def arity(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class LikelihoodOp:
    """Linear likelihood atom  L{a1*(f1)+...+an*(fn) >= b}  over masses."""

    coeffs: tuple[Fraction, ...]
    bound: Fraction

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("likelihood atom needs at least one term")

    @property
    def arity(self) -> int:
        return len(self.coeffs)


ModalOp = BoxOp | CondOp | AgencyOp | CountOp | LikelihoodOp

# ---------------------------------------------------------------------------
# formulas

class Formula:
    """Base class of all formula nodes."""

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Falsum(Formula):
    pass


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Modal(Formula):
    op: ModalOp
    args: tuple[Formula, ...]

    def __post_init__(self):
        if len(self.args) != self.op.arity:
            raise ValueError(
                f"operator {self.op} expects {self.op.arity} arguments, got {len(self.args)}"
            )


def true() -> Formula:
    return Not(Falsum())


SignMap = dict[Formula, bool]

# ---------------------------------------------------------------------------
# logic families

_FAMILIES = {
    "k": "box",
    "t": "box",
    "ck": "cond",
    "ckid": "cond",
    "ckmp": "cond",
    "agency": "agency",
    "presburger": "count",
    "presburger-t": "count",
    "presburger-half": "count",
    "prob": "prob",
}


def operator_family(logic_id: str) -> str:
    """Map a logic id to the operator family its parser admits."""
    if logic_id.startswith("prob-stat:"):
        return "prob"
    try:
        return _FAMILIES[logic_id]
    except KeyError:
        raise ParseError(f"unknown logic id {logic_id!r}") from None


# ---------------------------------------------------------------------------
# structural measures

def rank(f: Formula) -> int:
    """Maximal nesting depth of modal operators; variables count 0."""
    if isinstance(f, (Falsum, Var)):
        return 0
    if isinstance(f, Not):
        return rank(f.child)
    if isinstance(f, (And, Or, Implies, Iff)):
        return max(rank(f.left), rank(f.right))
    if isinstance(f, Modal):
        return 1 + max((rank(a) for a in f.args), default=0)
    raise TypeError(f"not a formula: {f!r}")


def size(f: Formula) -> int:
    """Token count with integers and rationals measured in binary digits."""
    if isinstance(f, (Falsum, Var)):
        return 1
    if isinstance(f, Not):
        return 1 + size(f.child)
    if isinstance(f, (And, Or, Implies, Iff)):
        return 1 + size(f.left) + size(f.right)
    if isinstance(f, Modal):
        base = 1
        op = f.op
        if isinstance(op, CountOp):
            base += sum(max(abs(c), 1).bit_length() for c in op.coeffs)
            base += max(abs(op.rhs), 1).bit_length()
            if op.modulus is not None:
                base += op.modulus.bit_length()
        elif isinstance(op, LikelihoodOp):
            for q in list(op.coeffs) + [op.bound]:
                base += max(abs(q.numerator), 1).bit_length() + q.denominator.bit_length()
        return base + sum(size(a) for a in f.args)
    raise TypeError(f"not a formula: {f!r}")


def subformulas(f: Formula) -> Iterator[Formula]:
    """Preorder traversal of all subformula occurrences."""
    yield f
    if isinstance(f, Not):
        yield from subformulas(f.child)
    elif isinstance(f, (And, Or, Implies, Iff)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, Modal):
        for a in f.args:
            yield from subformulas(a)


def atoms(f: Formula) -> tuple[Formula, ...]:
    """All atomic subformulas (variables and modal nodes) in preorder, deduplicated."""
    seen: dict[Formula, None] = {}
    for sub in subformulas(f):
        if isinstance(sub, (Var, Modal)) and sub not in seen:
            seen[sub] = None
    return tuple(seen)


def variables(f: Formula) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for sub in subformulas(f):
        if isinstance(sub, Var) and sub.name not in seen:
            seen[sub.name] = None
    return tuple(seen)


@dataclass
class Analysis:
    """Atoms of a formula, its carrier alphabet, and the letter substitution.

    The alphabet is the set of atoms occurring within the scope of at least
    one modal operator; ``sigma`` maps each alphabet letter back to the
    formula it stands for (letters are the subformulas themselves, so the
    map is an identity embedding kept explicit for clarity).
    """

    atoms: tuple[Formula, ...]
    alphabet: tuple[Formula, ...]
    sigma: dict[Formula, Formula]


def analyze(f: Formula) -> Analysis:
    all_atoms = atoms(f)
    in_scope: dict[Formula, None] = {}

    def walk(g: Formula, scoped: bool) -> None:
        if isinstance(g, (Var, Modal)) and scoped and g not in in_scope:
            in_scope[g] = None
        if isinstance(g, Not):
            walk(g.child, scoped)
        elif isinstance(g, (And, Or, Implies, Iff)):
            walk(g.left, scoped)
            walk(g.right, scoped)
        elif isinstance(g, Modal):
            for a in g.args:
                walk(a, True)

    walk(f, False)
    alphabet = tuple(a for a in all_atoms if a in in_scope)
    return Analysis(all_atoms, alphabet, {a: a for a in alphabet})


# ---------------------------------------------------------------------------
# skeleton evaluation

def eval_under(f: Formula, signs: Mapping[Formula, bool]) -> bool:
    """Evaluate ``f`` with every atom replaced by its sign.

    Modal nodes are never descended into: each is an atom and must be
    present in ``signs``.
    """
    if f in signs:
        return signs[f]
    if isinstance(f, Falsum):
        return False
    if isinstance(f, Not):
        return not eval_under(f.child, signs)
    if isinstance(f, And):
        return eval_under(f.left, signs) and eval_under(f.right, signs)
    if isinstance(f, Or):
        return eval_under(f.left, signs) or eval_under(f.right, signs)
    if isinstance(f, Implies):
        return (not eval_under(f.left, signs)) or eval_under(f.right, signs)
    if isinstance(f, Iff):
        return eval_under(f.left, signs) == eval_under(f.right, signs)
    raise UnknownAtomError(f"atom {render(f)} has no assigned sign")


def skeleton_entails(signs: SignMap, f: Formula) -> bool:
    """True iff the conjunction of the sign map's literals entails ``f``.

    Since the map fixes every atom of ``f``, propositional entailment
    coincides with plain evaluation.
    """
    return eval_under(f, signs)


def eval3(f: Formula, signs: Mapping[Formula, bool]) -> bool | None:
    """Three-valued evaluation under a partial sign map; None means unknown."""
    if f in signs:
        return signs[f]
    if isinstance(f, Falsum):
        return False
    if isinstance(f, (Var, Modal)):
        return None
    if isinstance(f, Not):
        v = eval3(f.child, signs)
        return None if v is None else not v
    if isinstance(f, And):
        l, r = eval3(f.left, signs), eval3(f.right, signs)
        if l is False or r is False:
            return False
        if l is True and r is True:
            return True
        return None
    if isinstance(f, Or):
        l, r = eval3(f.left, signs), eval3(f.right, signs)
        if l is True or r is True:
            return True
        if l is False and r is False:
            return False
        return None
    if isinstance(f, Implies):
        l, r = eval3(f.left, signs), eval3(f.right, signs)
        if l is False or r is True:
            return True
        if l is True and r is False:
            return False
        return None
    if isinstance(f, Iff):
        l, r = eval3(f.left, signs), eval3(f.right, signs)
        if l is None or r is None:
            return None
        return l == r
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# rendering

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}


def render(f: Formula) -> str:
    """Canonical concrete syntax; parse(render(f)) is structurally equal to f."""
    return _render(f, 0)


def _render(f: Formula, ctx: int) -> str:
    if isinstance(f, Falsum):
        return "false"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Not):
        return "~" + _render(f.child, 5)
    if isinstance(f, Iff):
        s = _render(f.left, 1) + "<->" + _render(f.right, 2)
        prec = 1
    elif isinstance(f, Implies):
        s = _render(f.left, 3) + "->" + _render(f.right, 2)
        prec = 2
    elif isinstance(f, Or):
        s = _render(f.left, 3) + "|" + _render(f.right, 4)
        prec = 3
    elif isinstance(f, And):
        s = _render(f.left, 4) + "&" + _render(f.right, 5)
        prec = 4
    elif isinstance(f, Modal):
        return _render_modal(f)
    else:
        raise TypeError(f"not a formula: {f!r}")
    return "(" + s + ")" if prec < ctx else s


def _render_modal(f: Formula) -> str:
    assert isinstance(f, Modal)
    op = f.op
    if isinstance(op, BoxOp):
        return "[]" + _render(f.args[0], 5)
    if isinstance(op, CondOp):
        return "(" + _render(f.args[0], 0) + "=>" + _render(f.args[1], 0) + ")"
    if isinstance(op, AgencyOp):
        return op.kind + " " + _render(f.args[0], 5)
    if isinstance(op, CountOp):
        lin = _render_lin(op.coeffs, f.args)
        if op.rel == "mod":
            return "#{" + lin + " mod " + str(op.modulus) + "=" + str(op.rhs) + "}"
        return "#{" + lin + op.rel + str(op.rhs) + "}"
    if isinstance(op, LikelihoodOp):
        lin = _render_lin(op.coeffs, f.args)
        return "L{" + lin + ">=" + str(op.bound) + "}"
    raise TypeError(f"unknown operator {op!r}")


def _render_lin(coeffs, args) -> str:
    parts = []
    for i, (c, a) in enumerate(zip(coeffs, args)):
        body = str(abs(c)) + "*(" + _render(a, 0) + ")"
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("-" if c < 0 else "+") + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# tokenizer

_SYMBOLS = ("<->", ">=", "->", "=>", "<>", "[]", "#{", "L{")
_SINGLES = set("()&|~<>=+-*/{}[]")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    toks: list[tuple[str, object, int]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        matched = False
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(("sym", sym, i))
                i += len(sym)
                matched = True
                break
        if matched:
            continue
        if ch in ("E", "C"):
            toks.append(("sym", ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("int", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha() and ch.islower():
            j = i
            while j < n and (text[j].isalnum() and not text[j].isupper() or text[j] == "_"):
                j += 1
            toks.append(("ident", text[i:j], i))
            i = j
            continue
        if ch in _SINGLES:
            toks.append(("sym", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(("eof", None, n))
    return toks


# ---------------------------------------------------------------------------
# parser

class _Parser:
    def __init__(self, text: str, family: str, logic_id: str):
        self.toks = _tokenize(text)
        self.pos = 0
        self.family = family
        self.logic_id = logic_id

    def peek(self) -> tuple[str, object, int]:
        return self.toks[self.pos]

    def next(self) -> tuple[str, object, int]:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def accept(self, sym: str) -> bool:
        kind, val, _ = self.peek()
        if kind == "sym" and val == sym:
            self.pos += 1
            return True
        return False

    def expect(self, sym: str) -> None:
        kind, val, at = self.next()
        if kind != "sym" or val != sym:
            raise ParseError(f"expected {sym!r}, found {val!r}", at)

    def fail_logic(self, op: str, at: int) -> None:
        raise LogicMismatchError(
            f"operator {op!r} is not available under logic {self.logic_id!r}", at
        )

    # grammar: formula := iff
    def formula(self) -> Formula:
        f = self.impl()
        while self.accept("<->"):
            f = Iff(f, self.impl())
        return f

    def impl(self) -> Formula:
        f = self.disj()
        if self.accept("->"):
            return Implies(f, self.impl())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.accept("|"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, val, at = self.peek()
        if kind == "sym" and val == "~":
            self.next()
            return Not(self.unary())
        if kind == "sym" and val == "(":
            self.next()
            f = self.formula()
            if self.accept("=>"):
                if self.family != "cond":
                    self.fail_logic("=>", at)
                g = self.formula()
                self.expect(")")
                return Modal(CondOp(), (f, g))
            self.expect(")")
            return f
        if kind == "ident":
            self.next()
            if val == "true":
                return true()
            if val == "false":
                return Falsum()
            if val == "mod":
                raise ParseError("keyword 'mod' cannot start a formula", at)
            return Var(val)  # type: ignore[arg-type]
        if kind == "sym" and val == "[]":
            self.next()
            if self.family != "box":
                self.fail_logic("[]", at)
            return Modal(BoxOp(), (self.unary(),))
        if kind == "sym" and val == "<>":
            self.next()
            if self.family != "box":
                self.fail_logic("<>", at)
            return Not(Modal(BoxOp(), (Not(self.unary()),)))
        if kind == "sym" and val in ("E", "C"):
            self.next()
            if self.family != "agency":
                self.fail_logic(val, at)  # type: ignore[arg-type]
            return Modal(AgencyOp(val), (self.unary(),))  # type: ignore[arg-type]
        if kind == "sym" and val == "#{":
            self.next()
            if self.family != "count":
                self.fail_logic("#{", at)
            return self.count_atom()
        if kind == "sym" and val == "<":
            # graded diamond <n>f, sugar for #{1*(f) > n}
            if self.toks[self.pos + 1][0] == "int":
                self.next()
                if self.family != "count":
                    self.fail_logic("<n>", at)
                n = self.next()[1]
                self.expect(">")
                arg = self.unary()
                return Modal(CountOp((1,), ">", n), (arg,))  # type: ignore[arg-type]
            raise ParseError("unexpected '<'", at)
        if kind == "sym" and val == "[":
            # graded box [n]f, sugar for ~<n>~f
            if self.toks[self.pos + 1][0] == "int":
                self.next()
                if self.family != "count":
                    self.fail_logic("[n]", at)
                n = self.next()[1]
                self.expect("]")
                arg = self.unary()
                return Not(Modal(CountOp((1,), ">", n), (Not(arg),)))  # type: ignore[arg-type]
            raise ParseError("unexpected '['", at)
        if kind == "sym" and val == "L{":
            self.next()
            if self.family != "prob":
                self.fail_logic("L{", at)
            return self.likelihood_atom()
        raise ParseError(f"unexpected token {val!r}", at)

    def count_atom(self) -> Formula:
        coeffs, args = self.lin(rational=False)
        kind, val, at = self.next()
        if kind != "sym" or val not in ("<", ">", "="):
            if kind == "ident" and val == "mod":
                k = self.int_token()
                self.expect("=")
                r = self.int_token()
                self.expect("}")
                return Modal(CountOp(tuple(coeffs), "mod", r, k), tuple(args))
            raise ParseError(f"expected comparison, found {val!r}", at)
        rhs = self.signed_int()
        self.expect("}")
        return Modal(CountOp(tuple(coeffs), val, rhs), tuple(args))  # type: ignore[arg-type]

    def likelihood_atom(self) -> Formula:
        coeffs, args = self.lin(rational=True)
        self.expect(">=")
        bound = self.rat()
        self.expect("}")
        return Modal(LikelihoodOp(tuple(Fraction(c) for c in coeffs), bound), tuple(args))

    def lin(self, rational: bool):
        coeffs: list = []
        args: list[Formula] = []
        sign = -1 if self.accept("-") else 1
        while True:
            c = self.rat() if rational else self.int_token()
            self.expect("*")
            self.expect("(")
            args.append(self.formula())
            self.expect(")")
            coeffs.append(sign * c)
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                return coeffs, args

    def int_token(self) -> int:
        kind, val, at = self.next()
        if kind != "int":
            raise ParseError(f"expected integer, found {val!r}", at)
        return val  # type: ignore[return-value]

    def signed_int(self) -> int:
        if self.accept("-"):
            return -self.int_token()
        return self.int_token()

    def rat(self) -> Fraction:
        num = self.signed_int()
        if self.accept("/"):
            den = self.int_token()
            if den == 0:
                raise ParseError("zero denominator")
            return Fraction(num, den)
        return Fraction(num)


def parse(text: str, logic_id: str) -> Formula:
    """Parse concrete syntax under the operator family of ``logic_id``."""
    family = operator_family(logic_id)
    p = _Parser(text, family, logic_id)
    f = p.formula()
    kind, val, at = p.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {val!r}", at)
    return f

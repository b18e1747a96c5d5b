"""Independent brute-force deciders used only in tests and cross-validation.

Bounded-state satisfiability ("is there a pointed model with at most n
states?") is decided exactly by encoding the model space propositionally
and running the in-house DPLL core; decoded models are re-verified by a
direct bottom-up evaluator, so a positive answer never rests on the
encoding alone.  One-step structures over a fixed carrier are enumerated
outright.  None of this shares clause or extension machinery with the
solver: only the formula AST and the engines' atom evaluation are reused.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .dpll import CnfBuilder
from .engines import (
    AgencyEngine,
    AgencyStructure,
    CondEngine,
    CondStructure,
    CountEngine,
    CountStructure,
    KripkeEngine,
    KripkeStructure,
    ProbEngine,
    ProbStructure,
)
from .engines.agency import STAR, TOP
from .errors import CosatError, ResourceLimitError
from .formula import (
    And,
    BoxOp,
    CondOp,
    Falsum,
    Formula,
    Iff,
    Implies,
    Modal,
    Not,
    Or,
    Var,
    atoms,
    rank,
    subformulas,
    variables,
)
from .logics import LogicConfig
from .onestep import Carrier, Clause, OneStepModel, model_check_clause


@dataclass
class SearchBounds:
    """Caps for the exhaustive searches; all positive."""

    max_states: int = 6
    max_weight: int = 5
    denominator_cap: int = 6
    entry_cap: int = 8

    def __post_init__(self):
        if min(self.max_states, self.max_weight, self.denominator_cap, self.entry_cap) < 1:
            raise ValueError("all search bounds must be positive")


# ---------------------------------------------------------------------------
# bounded Kripke models

@dataclass
class KripkeOracleModel:
    num_states: int
    edges: frozenset
    valuation: dict[str, frozenset]
    root: int = 0

    def successors(self, x: int) -> list[int]:
        return [y for (i, y) in self.edges if i == x]


def eval_kripke(m: KripkeOracleModel, f: Formula, x: int, memo=None) -> bool:
    if memo is None:
        memo = {}
    key = (f, x)
    if key in memo:
        return memo[key]
    if isinstance(f, Falsum):
        v = False
    elif isinstance(f, Var):
        v = x in m.valuation.get(f.name, frozenset())
    elif isinstance(f, Not):
        v = not eval_kripke(m, f.child, x, memo)
    elif isinstance(f, And):
        v = eval_kripke(m, f.left, x, memo) and eval_kripke(m, f.right, x, memo)
    elif isinstance(f, Or):
        v = eval_kripke(m, f.left, x, memo) or eval_kripke(m, f.right, x, memo)
    elif isinstance(f, Implies):
        v = not eval_kripke(m, f.left, x, memo) or eval_kripke(m, f.right, x, memo)
    elif isinstance(f, Iff):
        v = eval_kripke(m, f.left, x, memo) == eval_kripke(m, f.right, x, memo)
    elif isinstance(f, Modal) and isinstance(f.op, BoxOp):
        v = all(eval_kripke(m, f.args[0], y, memo) for y in m.successors(x))
    else:
        raise CosatError("kripke oracle only understands box formulas")
    memo[key] = v
    return v


def _encode_kripke(f: Formula, n: int, reflexive: bool, depth_limit: int | None = None):
    b = CnfBuilder()
    false_var = b.new_var()
    b.add(-false_var)
    val = {p: [b.new_var() for _ in range(n)] for p in variables(f)}
    edge = [[b.new_var() for _ in range(n)] for _ in range(n)]
    lits: dict[tuple[Formula, int], int] = {}

    def lit(g: Formula, i: int) -> int:
        key = (g, i)
        if key in lits:
            return lits[key]
        if isinstance(g, Falsum):
            res = false_var
        elif isinstance(g, Var):
            res = val[g.name][i]
        elif isinstance(g, Not):
            res = -lit(g.child, i)
        elif isinstance(g, And):
            res = b.define_and([lit(g.left, i), lit(g.right, i)])
        elif isinstance(g, Or):
            res = b.define_or([lit(g.left, i), lit(g.right, i)])
        elif isinstance(g, Implies):
            res = b.define_or([-lit(g.left, i), lit(g.right, i)])
        elif isinstance(g, Iff):
            res = b.define_iff(lit(g.left, i), lit(g.right, i))
        elif isinstance(g, Modal) and isinstance(g.op, BoxOp):
            v = b.new_var()
            breakers = []
            for j in range(n):
                b.add(-v, -edge[i][j], lit(g.args[0], j))
                breakers.append(b.define_and([edge[i][j], -lit(g.args[0], j)]))
            b.add(v, *breakers)
            res = v
        else:
            raise CosatError("kripke oracle only understands box formulas")
        lits[key] = res
        return res

    if reflexive:
        for i in range(n):
            b.add(edge[i][i])
    b.add(lit(f, 0))
    # pin every root-unreachable state to an edgeless all-false shape: box
    # truths at live states never look at them, and leaving them free makes
    # the search thrash on meaningless assignments
    levels = n - 1 if depth_limit is None else min(depth_limit, n - 1)
    reach = [-false_var] + [false_var] * (n - 1)
    for _ in range(levels):
        reach = [
            b.define_or(
                [reach[j]]
                + [b.define_and([reach[i], edge[i][j]]) for i in range(n) if i != j]
            )
            for j in range(n)
        ]
    for j in range(1, n):
        for k in range(n):
            if k != j:
                b.add(reach[j], -edge[j][k])
        for cols in val.values():
            b.add(reach[j], -cols[j])
    return b, edge, val


def kripke_brute(
    f: Formula, n: int, reflexive: bool = False, depth_limit: int | None = None
) -> KripkeOracleModel | None:
    """A pointed Kripke model with at most ``n`` states satisfying ``f`` at
    its root, or None; absence is conclusive only relative to ``n``.

    The search space (all edge sets, with loops forced in the reflexive
    case, and all valuations of the formula's variables) is decided exactly
    via a propositional encoding; any model with fewer states extends to
    exactly ``n`` states by unreachable padding, so a single run suffices.
    """
    if n < 1:
        raise ValueError("need at least one state")
    b, edge, val = _encode_kripke(f, n, reflexive, depth_limit)
    solution = b.solve()
    if solution is None:
        return None
    edges = frozenset(
        (i, j) for i in range(n) for j in range(n) if solution[edge[i][j] - 1]
    )
    valuation = {
        p: frozenset(i for i in range(n) if solution[cols[i] - 1])
        for p, cols in val.items()
    }
    model = KripkeOracleModel(n, edges, valuation)
    assert eval_kripke(model, f, 0), "decoded kripke model fails direct evaluation"
    return model


# ---------------------------------------------------------------------------
# bounded conditional models (ck / ckid)

@dataclass
class CondOracleModel:
    num_states: int
    valuation: dict[str, frozenset]
    tables: list[dict[frozenset, frozenset]]
    root: int = 0


def eval_cond(m: CondOracleModel, f: Formula) -> dict[Formula, frozenset]:
    """Subformula extensions, bottom-up; undefined antecedents select nothing."""
    everything = frozenset(range(m.num_states))
    ext: dict[Formula, frozenset] = {}

    def of(g: Formula) -> frozenset:
        if g in ext:
            return ext[g]
        if isinstance(g, Falsum):
            r = frozenset()
        elif isinstance(g, Var):
            r = m.valuation.get(g.name, frozenset())
        elif isinstance(g, Not):
            r = everything - of(g.child)
        elif isinstance(g, And):
            r = of(g.left) & of(g.right)
        elif isinstance(g, Or):
            r = of(g.left) | of(g.right)
        elif isinstance(g, Implies):
            r = (everything - of(g.left)) | of(g.right)
        elif isinstance(g, Iff):
            l, rr = of(g.left), of(g.right)
            r = (l & rr) | (everything - l - rr)
        elif isinstance(g, Modal) and isinstance(g.op, CondOp):
            ante, cons = of(g.args[0]), of(g.args[1])
            r = frozenset(
                x
                for x in range(m.num_states)
                if m.tables[x].get(ante, frozenset()) <= cons
            )
        else:
            raise CosatError("conditional oracle only understands conditionals")
        ext[g] = r
        return r

    of(f)
    return ext


def _cond_bounded(f: Formula, n: int, variant: str) -> CondOracleModel | None:
    b = CnfBuilder()
    false_var = b.new_var()
    b.add(-false_var)
    val = {p: [b.new_var() for _ in range(n)] for p in variables(f)}
    conds = [g for g in atoms(f) if isinstance(g, Modal) and isinstance(g.op, CondOp)]
    sel = {
        (x, k, y): b.new_var()
        for x in range(n)
        for k in range(len(conds))
        for y in range(n)
    }
    lits: dict[tuple[Formula, int], int] = {}

    def lit(g: Formula, i: int) -> int:
        key = (g, i)
        if key in lits:
            return lits[key]
        if isinstance(g, Falsum):
            res = false_var
        elif isinstance(g, Var):
            res = val[g.name][i]
        elif isinstance(g, Not):
            res = -lit(g.child, i)
        elif isinstance(g, And):
            res = b.define_and([lit(g.left, i), lit(g.right, i)])
        elif isinstance(g, Or):
            res = b.define_or([lit(g.left, i), lit(g.right, i)])
        elif isinstance(g, Implies):
            res = b.define_or([-lit(g.left, i), lit(g.right, i)])
        elif isinstance(g, Iff):
            res = b.define_iff(lit(g.left, i), lit(g.right, i))
        elif isinstance(g, Modal) and isinstance(g.op, CondOp):
            k = conds.index(g)
            v = b.new_var()
            breakers = []
            for y in range(n):
                b.add(-v, -sel[(i, k, y)], lit(g.args[1], y))
                breakers.append(b.define_and([sel[(i, k, y)], -lit(g.args[1], y)]))
            b.add(v, *breakers)
            res = v
        else:
            raise CosatError("conditional oracle only understands conditionals")
        lits[key] = res
        return res

    b.add(lit(f, 0))
    if variant == "ckid":
        for k, g in enumerate(conds):
            for x in range(n):
                for y in range(n):
                    b.add(-sel[(x, k, y)], lit(g.args[0], y))
    # the selection tables are keyed by antecedent extension: syntactically
    # different antecedents with the same extension must select alike
    for k1 in range(len(conds)):
        for k2 in range(k1 + 1, len(conds)):
            same = b.define_and(
                [
                    b.define_iff(lit(conds[k1].args[0], y), lit(conds[k2].args[0], y))
                    for y in range(n)
                ]
            )
            for x in range(n):
                for y in range(n):
                    b.add(-same, -sel[(x, k1, y)], sel[(x, k2, y)])
                    b.add(-same, sel[(x, k1, y)], -sel[(x, k2, y)])

    solution = b.solve()
    if solution is None:
        return None

    def truth(g: Formula, i: int) -> bool:
        l = lit(g, i)
        return solution[l - 1] if l > 0 else not solution[-l - 1]

    valuation = {
        p: frozenset(i for i in range(n) if solution[cols[i] - 1])
        for p, cols in val.items()
    }
    tables: list[dict[frozenset, frozenset]] = []
    for x in range(n):
        table: dict[frozenset, frozenset] = {}
        for k, g in enumerate(conds):
            ante = frozenset(y for y in range(n) if truth(g.args[0], y))
            chosen = frozenset(y for y in range(n) if solution[sel[(x, k, y)] - 1])
            if ante in table:
                assert table[ante] == chosen, "inconsistent decoded selection table"
            table[ante] = chosen
        if variant == "ckid":
            assert all(v <= k for k, v in table.items())
        tables.append(table)
    model = CondOracleModel(n, valuation, tables)
    assert 0 in eval_cond(model, f)[f], "decoded conditional model fails evaluation"
    return model


# ---------------------------------------------------------------------------
# the bounded-size procedure

def bounded_model_search(f: Formula, cfg: LogicConfig, bounds: SearchBounds):
    """Exhaustive search over models within the shallow-construction size
    bound (sum of branching powers up to the rank); raises ResourceLimitError
    instead of guessing when that bound exceeds the configured cap."""
    n_modal = sum(1 for a in atoms(f) if isinstance(a, Modal))
    p = cfg.engine.small_bound(n_modal)
    if p is None:
        raise CosatError(f"bounded search is not available for {cfg.logic_id}")
    p = max(p, 1)
    n = sum(p**i for i in range(rank(f) + 1))
    if n > bounds.max_states:
        raise ResourceLimitError(
            f"model size bound {n} exceeds the configured cap {bounds.max_states}"
        )
    if cfg.logic_id in ("k", "t"):
        # a model within the size bound exists iff a shallow one does, so
        # the search may pin everything beyond rank-many steps from the root
        return kripke_brute(f, n, reflexive=cfg.logic_id == "t", depth_limit=rank(f))
    if cfg.logic_id in ("ck", "ckid"):
        return _cond_bounded(f, n, cfg.logic_id)
    raise CosatError(f"bounded search is not implemented for {cfg.logic_id}")


# ---------------------------------------------------------------------------
# exhaustive one-step search

def _subsets(carrier: Carrier, universe) -> list[frozenset]:
    ordered = carrier.sort(universe)
    out = []
    for mask in range(1 << len(ordered)):
        out.append(frozenset(ordered[i] for i in range(len(ordered)) if mask >> i & 1))
    return out


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _structures(engine, clause: Clause, carrier: Carrier, bounds: SearchBounds):
    classes = carrier.sort(carrier.classes)
    if isinstance(engine, KripkeEngine):
        for succ in _subsets(carrier, classes):
            yield KripkeStructure(succ)
        return
    if isinstance(engine, CondEngine):
        keys = []
        for a in clause:
            if a.args[0] not in keys:
                keys.append(a.args[0])
        keys = keys[: bounds.entry_cap]
        value_space = {
            key: (_subsets(carrier, key) if engine.variant == "ckid" else _subsets(carrier, classes))
            for key in keys
        }
        for defined_mask in range(1 << len(keys)):
            defined = [keys[i] for i in range(len(keys)) if defined_mask >> i & 1]
            for combo in itertools.product(*(value_space[k] for k in defined)):
                yield engine._pack(dict(zip(defined, combo)), carrier)
        return
    if isinstance(engine, AgencyEngine):
        keys = []
        for a in clause:
            if a.args[0] not in keys:
                keys.append(a.args[0])
        for combo in itertools.product((None, STAR, TOP), repeat=len(keys)):
            entries = {k: v for k, v in zip(keys, combo) if v is not None}
            yield engine._pack(entries, carrier)
        return
    if isinstance(engine, CountEngine):
        rng = range(bounds.max_weight + 1)
        self_rng = rng if engine.copointed else (0,)
        for weights in itertools.product(rng, repeat=len(classes)):
            for self_w in self_rng:
                yield CountStructure(
                    tuple((c, w) for c, w in zip(classes, weights) if w > 0), self_w
                )
        return
    if isinstance(engine, ProbEngine):
        nvars = len(classes) + (1 if engine.copointed else 0)
        for denom in range(1, bounds.denominator_cap + 1):
            for parts in _compositions(denom, nvars):
                masses = tuple(
                    (c, Fraction(k, denom))
                    for c, k in zip(classes, parts)
                    if k > 0
                )
                self_m = Fraction(parts[-1], denom) if engine.copointed else Fraction(0)
                yield ProbStructure(masses, self_m)
        return
    raise CosatError(f"no structure enumerator for engine {engine.name}")


def onestep_brute(
    engine, clause: Clause, carrier: Carrier, bounds: SearchBounds | None = None
) -> OneStepModel | None:
    """Enumerate engine structures over the carrier within bounds and return
    the first one satisfying the clause, or None."""
    bounds = bounds or SearchBounds()
    points = carrier.class_set
    for structure in _structures(engine, clause, carrier, bounds):
        if not engine.check_structure(structure, points, carrier.designated):
            continue
        model = OneStepModel(carrier, structure)
        if model_check_clause(engine, model, clause):
            return model
    return None

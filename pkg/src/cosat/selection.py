"""Selection-function semantics for the agency logic and the transformations
between it and the 3-valued neighborhood witnesses.

A selection model stores, per state, a partial map from state sets to state
sets; absent keys select the empty set.  The transformations are evaluated
lazily on the extensions relevant to a query formula (closed under
intersection, so the meet condition holds for the represented total map),
which avoids materializing exponentially many neighborhoods.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engines.agency import BOT, STAR, TOP, AgencyStructure, closure_eval
from .errors import CosatError
from .formula import And, Falsum, Formula, Iff, Implies, Modal, Not, Or, Var, AgencyOp, subformulas
from .logics import LogicConfig
from .witness import ShallowModel, WitnessState, _extensions


@dataclass
class SelectionModel:
    states: tuple[int, ...]
    select: dict[int, dict[frozenset, frozenset]]
    valuation: dict[str, frozenset]

    def selection(self, x: int, ext: frozenset) -> frozenset:
        return self.select.get(x, {}).get(ext, frozenset())


def check_selection_conditions(sm: SelectionModel) -> list[str]:
    """Violations of the selection-frame conditions over the defined entries."""
    problems = []
    everything = frozenset(sm.states)
    for x in sm.states:
        table = sm.select.get(x, {})
        if sm.selection(x, everything):
            problems.append(f"state {x}: selection on the full state set is nonempty")
        for key, val in table.items():
            if not val <= key:
                problems.append(f"state {x}: selection leaves its argument set")
        for a in table:
            for b in table:
                meet = sm.selection(x, a) & sm.selection(x, b)
                if not meet <= sm.selection(x, a & b):
                    problems.append(
                        f"state {x}: selections of two sets exceed the selection of their meet"
                    )
    return problems


def selection_extensions(sm: SelectionModel, f: Formula) -> dict[Formula, frozenset]:
    """Subformula extensions under the selection semantics."""
    everything = frozenset(sm.states)
    ext: dict[Formula, frozenset] = {}

    def of(g: Formula) -> frozenset:
        if g in ext:
            return ext[g]
        if isinstance(g, Falsum):
            r = frozenset()
        elif isinstance(g, Var):
            r = sm.valuation.get(g.name, frozenset())
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
        elif isinstance(g, Modal) and isinstance(g.op, AgencyOp):
            arg = of(g.args[0])
            if g.op.kind == "E":
                r = frozenset(x for x in sm.states if x in sm.selection(x, arg))
            else:
                r = frozenset(x for x in sm.states if sm.selection(x, arg))
        else:
            raise CosatError("selection semantics only covers agency formulas")
        ext[g] = r
        return r

    of(f)
    return ext


def _intersection_closure(family: set[frozenset]) -> set[frozenset]:
    closed = set(family)
    added = True
    while added:
        added = False
        for a in list(closed):
            for b in list(closed):
                meet = a & b
                if meet not in closed:
                    closed.add(meet)
                    added = True
    return closed


def to_selection(m: ShallowModel, f: Formula, cfg: LogicConfig) -> SelectionModel:
    """Duplicate every state (so no relevant extension is a singleton), then
    read each neighborhood value off as a selection: top selects the whole
    set, star the set without the state, bot nothing."""
    n = len(m.states)
    ext = _extensions(m, f, cfg)
    states = tuple(range(2 * n))
    valuation: dict[str, frozenset] = {}
    for s in m.states:
        for name, val in s.assignment.items():
            if val:
                valuation[name] = valuation.get(name, frozenset()) | {s.sid, s.sid + n}

    relevant = {
        frozenset(ext[g]) | frozenset(x + n for x in ext[g])
        for g in subformulas(f)
        if g in ext
    }
    relevant = _intersection_closure(relevant)

    select: dict[int, dict[frozenset, frozenset]] = {}
    for s in m.states:
        for copy in (0, 1):
            x = s.sid + copy * n
            local = frozenset(y + copy * n for y in m.successors(s.sid))
            entries = {
                frozenset(p + copy * n for p in key): v
                for key, v in s.structure.entries
            }
            table: dict[frozenset, frozenset] = {}
            for ext_set in relevant:
                v = closure_eval(entries, ext_set & local)
                if v == TOP:
                    chosen = ext_set
                elif v == STAR:
                    chosen = ext_set - {x}
                else:
                    chosen = frozenset()
                if chosen:
                    table[ext_set] = chosen
            select[x] = table
    return SelectionModel(states, select, valuation)


def from_selection(sm: SelectionModel, f: Formula) -> ShallowModel:
    """Rebuild a neighborhood model from a selection model, pointwise on the
    extensions relevant to the query; raises on frame-condition violations."""
    problems = check_selection_conditions(sm)
    if problems:
        raise CosatError("selection model violates its frame conditions: " + problems[0])
    ext = selection_extensions(sm, f)
    relevant = {frozenset(e) for e in ext.values()}
    states = []
    edges = []
    for x in sorted(sm.states):
        entries = {}
        for ext_set in sorted(relevant, key=sorted):
            chosen = sm.selection(x, ext_set)
            if x in chosen:
                entries[ext_set] = TOP
            elif chosen:
                entries[ext_set] = STAR
        structure = AgencyStructure(
            tuple(sorted(entries.items(), key=lambda kv: sorted(kv[0])))
        )
        assignment = {
            name: x in members for name, members in sorted(sm.valuation.items())
        }
        states.append(WitnessState(x, assignment, structure, True))
        for y in sorted(sm.states):
            edges.append((x, y))
    return ShallowModel("agency", min(sm.states), states, edges)

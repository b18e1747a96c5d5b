"""Shallow witness models: an independent model checker, a verifier for the
shape guarantees, and JSON serialization.

The model checker computes subformula extensions bottom-up over the whole
state set and consults the engine's atom evaluation at each state's local
successor structure; it shares no clause machinery with the solver and
serves as a second opinion on every SAT verdict.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .engines import AgencyStructure, CondStructure, CountStructure, KripkeStructure, ProbStructure
from .engines.probability import ProbEngine
from .errors import ModelFormatError
from .formula import Falsum, Formula, Iff, Implies, Modal, Not, And, Or, Var, rank, atoms
from .logics import LogicConfig

SCHEMA_VERSION = 1


@dataclass
class WitnessState:
    sid: int
    assignment: dict[str, bool]
    structure: object
    looped: bool


@dataclass
class ShallowModel:
    """States with per-state successor structures over their children.

    The edge list is the supporting frame: removing loop edges must leave a
    tree rooted at ``root``.
    """

    logic_id: str
    root: int
    states: list[WitnessState]
    edges: list[tuple[int, int]]

    def state(self, sid: int) -> WitnessState:
        return self.states[sid]

    def successors(self, sid: int) -> frozenset:
        return frozenset(y for x, y in self.edges if x == sid)


# ---------------------------------------------------------------------------
# model checking

def _extensions(m: ShallowModel, f: Formula, cfg: LogicConfig) -> dict[Formula, frozenset]:
    engine = cfg.engine
    succ = {s.sid: m.successors(s.sid) for s in m.states}
    ext: dict[Formula, frozenset] = {}

    def of(g: Formula) -> frozenset:
        if g in ext:
            return ext[g]
        if isinstance(g, Falsum):
            r = frozenset()
        elif isinstance(g, Var):
            r = frozenset(s.sid for s in m.states if s.assignment.get(g.name, False))
        elif isinstance(g, Not):
            r = frozenset(s.sid for s in m.states) - of(g.child)
        elif isinstance(g, And):
            r = of(g.left) & of(g.right)
        elif isinstance(g, Or):
            r = of(g.left) | of(g.right)
        elif isinstance(g, Implies):
            all_ids = frozenset(s.sid for s in m.states)
            r = (all_ids - of(g.left)) | of(g.right)
        elif isinstance(g, Iff):
            all_ids = frozenset(s.sid for s in m.states)
            l, rr = of(g.left), of(g.right)
            r = (l & rr) | (all_ids - l - rr)
        elif isinstance(g, Modal):
            arg_exts = [of(a) for a in g.args]
            holds = []
            for s in m.states:
                local = succ[s.sid]
                args = tuple(e & local for e in arg_exts)
                designated = s.sid if s.looped else None
                if engine.eval_atom(s.structure, local, designated, g.op, args):
                    holds.append(s.sid)
            r = frozenset(holds)
        else:
            raise TypeError(f"not a formula: {g!r}")
        ext[g] = r
        return r

    of(f)
    return ext


def model_check(m: ShallowModel, sid: int, f: Formula, cfg: LogicConfig) -> bool:
    """Truth of ``f`` at state ``sid`` by bottom-up extension computation."""
    return sid in _extensions(m, f, cfg)[f]


# ---------------------------------------------------------------------------
# verification

@dataclass
class CheckEntry:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class Report:
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.entries.append(CheckEntry(name, bool(ok), detail))

    def __str__(self) -> str:
        return "\n".join(
            f"{'ok' if e.ok else 'FAIL'} {e.name}" + (f": {e.detail}" if e.detail else "")
            for e in self.entries
        )


def verify(m: ShallowModel, f: Formula, cfg: LogicConfig) -> Report:
    """Check root satisfaction, frame conditions, tree shape, depth, and the
    per-state branching bound of the small strategy."""
    engine = cfg.engine
    report = Report()

    report.add("root-satisfies", model_check(m, m.root, f, cfg))

    bad = []
    for s in m.states:
        local = m.successors(s.sid)
        designated = s.sid if s.looped else None
        if not engine.mentioned_points(s.structure) <= local:
            bad.append(f"state {s.sid} mentions a non-successor")
        elif not engine.check_structure(s.structure, local, designated):
            bad.append(f"state {s.sid} violates the frame condition")
    report.add("frame-conditions", not bad, "; ".join(bad))

    loop_bad = []
    edge_set = set(m.edges)
    for s in m.states:
        has_loop = (s.sid, s.sid) in edge_set
        if has_loop != s.looped:
            loop_bad.append(f"state {s.sid}: loop edge and flag disagree")
        if s.looped and not cfg.copointed and not isinstance(cfg.engine, ProbEngine):
            loop_bad.append(f"state {s.sid}: loop flag outside a copointed logic")
        if cfg.copointed and not s.looped:
            loop_bad.append(f"state {s.sid}: copointed state without its loop")
    report.add("loop-flags", not loop_bad, "; ".join(loop_bad))

    parents: dict[int, list[int]] = {s.sid: [] for s in m.states}
    tree_ok, tree_detail = True, ""
    for x, y in m.edges:
        if x == y:
            continue
        if y not in parents or x not in parents:
            tree_ok, tree_detail = False, f"edge ({x},{y}) references a missing state"
            break
        parents[y].append(x)
    depth = -1
    if tree_ok:
        for sid, ps in parents.items():
            if sid == m.root and ps:
                tree_ok, tree_detail = False, "root has a parent"
            elif sid != m.root and len(ps) != 1:
                tree_ok, tree_detail = False, f"state {sid} has {len(ps)} parents"
    if tree_ok:
        seen = {m.root}
        queue = deque([(m.root, 0)])
        while queue:
            sid, d = queue.popleft()
            depth = max(depth, d)
            for y in sorted(m.successors(sid)):
                if y == sid:
                    continue
                if y in seen:
                    tree_ok, tree_detail = False, f"state {y} reached twice"
                    queue.clear()
                    break
                seen.add(y)
                queue.append((y, d + 1))
        if tree_ok and len(seen) != len(m.states):
            tree_ok, tree_detail = False, "unreachable states"
    report.add("tree-with-loops", tree_ok, tree_detail)

    if tree_ok:
        report.add(
            "depth-at-most-rank",
            depth <= rank(f),
            f"depth {depth}, rank {rank(f)}",
        )

    if cfg.strategy == "small":
        n_modal = sum(1 for a in atoms(f) if isinstance(a, Modal))
        bound = engine.small_bound(n_modal)
        if bound is not None:
            wide = [
                s.sid for s in m.states if len(m.successors(s.sid)) > bound
            ]
            report.add(
                "branching-bound",
                not wide,
                f"states over bound {bound}: {wide}" if wide else "",
            )

    return report


# ---------------------------------------------------------------------------
# serialization

def _frac_str(q: Fraction) -> str:
    return str(q)


def _structure_json(structure) -> dict:
    if isinstance(structure, KripkeStructure):
        return {"kind": "kripke", "succ": sorted(structure.succ)}
    if isinstance(structure, CondStructure):
        return {
            "kind": "cond",
            "entries": [
                [sorted(k), sorted(v)]
                for k, v in sorted(structure.entries, key=lambda kv: sorted(kv[0]))
            ],
        }
    if isinstance(structure, AgencyStructure):
        names = {0: "bot", 1: "star", 2: "top"}
        return {
            "kind": "agency",
            "entries": [
                [sorted(k), names[v]]
                for k, v in sorted(structure.entries, key=lambda kv: sorted(kv[0]))
            ],
        }
    if isinstance(structure, CountStructure):
        return {
            "kind": "count",
            "weights": sorted([p, w] for p, w in structure.weights),
            "self": structure.self_weight,
        }
    if isinstance(structure, ProbStructure):
        return {
            "kind": "prob",
            "mass": sorted([p, _frac_str(m)] for p, m in structure.masses),
            "self": _frac_str(structure.self_mass),
        }
    raise ModelFormatError(f"unknown structure type {type(structure).__name__}")


def _structure_from_json(d: dict):
    try:
        kind = d["kind"]
    except (TypeError, KeyError):
        raise ModelFormatError("structure record lacks a 'kind' tag") from None
    try:
        if kind == "kripke":
            return KripkeStructure(frozenset(int(x) for x in d["succ"]))
        if kind == "cond":
            return CondStructure(
                tuple(
                    (frozenset(int(x) for x in k), frozenset(int(x) for x in v))
                    for k, v in d["entries"]
                )
            )
        if kind == "agency":
            values = {"bot": 0, "star": 1, "top": 2}
            return AgencyStructure(
                tuple(
                    (frozenset(int(x) for x in k), values[v]) for k, v in d["entries"]
                )
            )
        if kind == "count":
            return CountStructure(
                tuple((int(p), int(w)) for p, w in d["weights"]),
                int(d["self"]),
            )
        if kind == "prob":
            return ProbStructure(
                tuple((int(p), Fraction(q)) for p, q in d["mass"]),
                Fraction(d["self"]),
            )
    except (KeyError, ValueError, TypeError) as exc:
        raise ModelFormatError(f"malformed {kind!r} structure: {exc}") from None
    raise ModelFormatError(f"unknown structure tag {kind!r}")


def serialize(m: ShallowModel) -> str:
    doc = {
        "v": SCHEMA_VERSION,
        "logic": m.logic_id,
        "root": m.root,
        "states": [
            {
                "id": s.sid,
                "vars": {k: v for k, v in sorted(s.assignment.items())},
                "loop": s.looped,
                "structure": _structure_json(s.structure),
            }
            for s in m.states
        ],
        "edges": sorted([x, y] for x, y in m.edges),
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def deserialize(text: str) -> ShallowModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("v") != SCHEMA_VERSION:
        raise ModelFormatError("missing or unsupported schema version")
    try:
        states = [
            WitnessState(
                int(s["id"]),
                {str(k): bool(v) for k, v in s["vars"].items()},
                _structure_from_json(s["structure"]),
                bool(s["loop"]),
            )
            for s in doc["states"]
        ]
        edges = [(int(x), int(y)) for x, y in doc["edges"]]
        model = ShallowModel(str(doc["logic"]), int(doc["root"]), states, edges)
    except (KeyError, ValueError, TypeError) as exc:
        raise ModelFormatError(f"malformed model document: {exc}") from None
    ids = [s.sid for s in model.states]
    if ids != list(range(len(ids))) or model.root not in ids:
        raise ModelFormatError("state ids must be 0..n-1 and include the root")
    return model

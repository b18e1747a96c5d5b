"""The shallow-model search: sign-map enumeration over all modal atoms,
admissible-class computation by recursion, one-step dispatch, and witness
assembly.

Satisfiability of a formula of positive rank reduces to: guess a sign for
every atom (all modal subformulas at every depth, plus variables) whose
skeleton evaluation makes the formula true; restrict the carrier to the
admissible classes, the alphabet assignments whose induced theories are
recursively satisfiable; hand the resulting one-step clause to the logic's
engine; and glue the recursive witnesses below the engine's structure.
For copointed logics the class cut out by the sign map is the designated
point and must itself be admissible, otherwise the root state assembled
around the loop would contradict its own guessed literals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .errors import InternalCheckError
from .formula import (
    Analysis,
    Formula,
    Modal,
    Not,
    SignMap,
    Var,
    analyze,
    eval3,
    eval_under,
    rank,
    render,
    variables,
)
from .logics import BOTH, LogicConfig
from .onestep import (
    CARRIER,
    Carrier,
    Clause,
    ClauseAtom,
    OneStepModel,
    SMALL,
    extension,
    theory,
)
from .witness import ShallowModel, WitnessState


@dataclass
class SolveStats:
    depth: int = 0
    max_carrier: int = 0
    max_structure: int = 0
    sign_maps: int = 0


@dataclass
class SatResult:
    satisfiable: bool
    model: ShallowModel | None
    stats: SolveStats


@dataclass
class _Node:
    """Solver-internal witness tree; flattened into a ShallowModel at the end.

    Cached nodes are shared here and copied apart during flattening, so the
    final model is a disjoint union of the recursive witnesses.
    """

    assignment: dict[str, bool]
    looped: bool
    model: OneStepModel | None  # None at childless leaves
    children: list[tuple[frozenset, "_Node"]] = field(default_factory=list)


def sat(f: Formula, cfg: LogicConfig) -> SatResult:
    """Decide satisfiability; SAT verdicts carry a shallow witness model."""
    stats = SolveStats()
    cache: dict[str, _Node | None] = {}
    node = _sat(f, cfg, cache, stats, depth=0, root_rank=rank(f))
    model = _flatten(node, cfg) if node is not None else None
    return SatResult(node is not None, model, stats)


def valid(f: Formula, cfg: LogicConfig) -> bool:
    """Validity is unsatisfiability of the negation."""
    return not sat(Not(f), cfg).satisfiable


# ---------------------------------------------------------------------------
# recursion

def _sat(f, cfg, cache, stats, depth, root_rank) -> _Node | None:
    key = render(f)
    if key in cache:
        return cache[key]
    r = rank(f)
    if depth + r > root_rank:
        raise InternalCheckError(
            f"recursion depth {depth} plus rank {r} exceeds the root rank {root_rank}"
        )
    stats.depth = max(stats.depth, depth)
    if r == 0:
        node = _prop_sat(f, cfg)
    else:
        node = _modal_sat(f, cfg, cache, stats, depth, root_rank)
    cache[key] = node
    return node


def _prop_sat(f: Formula, cfg: LogicConfig) -> _Node | None:
    names = variables(f)
    for values in itertools.product((False, True), repeat=len(names)):
        signs = {Var(n): v for n, v in zip(names, values)}
        if eval_under(f, signs):
            assignment = dict(zip(names, values))
            return _Node(assignment, cfg.engine.leaf_looped, None)
    return None


def _sign_maps(atom_list: tuple[Formula, ...], f: Formula) -> Iterator[SignMap]:
    """All total sign maps whose skeleton evaluation satisfies ``f``.

    Atoms are decided in subformula-traversal order, positive first, with
    pruning as soon as the partial map already falsifies the skeleton.
    """
    signs: SignMap = {}

    def go(i: int) -> Iterator[SignMap]:
        if i == len(atom_list):
            if eval3(f, signs) is True:
                yield dict(signs)
            return
        for value in (True, False):
            signs[atom_list[i]] = value
            if eval3(f, signs) is not False:
                yield from go(i + 1)
        del signs[atom_list[i]]

    return go(0)


def _modal_sat(f, cfg, cache, stats, depth, root_rank) -> _Node | None:
    info = analyze(f)
    admissible = _admissible(info, cfg, cache, stats, depth, root_rank)
    base = Carrier(info.alphabet, tuple(admissible))
    stats.max_carrier = max(stats.max_carrier, len(base.classes))
    admissible_set = base.class_set

    modal_atoms = [a for a in info.atoms if isinstance(a, Modal)]
    var_atoms = [a for a in info.atoms if isinstance(a, Var)]
    arg_ext = {}
    for atom in modal_atoms:
        for arg in atom.args:
            if arg not in arg_ext:
                arg_ext[arg] = extension(arg, base)

    for signs in _sign_maps(info.atoms, f):
        stats.sign_maps += 1
        carrier = base
        if cfg.copointed:
            designated = frozenset(a for a in info.alphabet if signs[a])
            if designated not in admissible_set:
                continue
            carrier = Carrier(base.alphabet, base.classes, designated)
        clause: Clause = tuple(
            ClauseAtom(signs[atom], atom.op, tuple(arg_ext[arg] for arg in atom.args))
            for atom in modal_atoms
        )
        model = _engine_sat(cfg, clause, carrier)
        if model is None:
            continue
        node = _assemble(model, signs, var_atoms, info, cfg, cache, stats)
        stats.max_carrier = max(stats.max_carrier, len(model.carrier.classes))
        stats.max_structure = max(
            stats.max_structure, cfg.engine.structure_size(model.structure)
        )
        return node
    return None


def _admissible(info: Analysis, cfg, cache, stats, depth, root_rank) -> list[frozenset]:
    """Alphabet assignments whose induced theories are recursively satisfiable.

    Every alphabet letter sits under a modal operator of the current
    formula, so each theory has strictly smaller rank and the recursion
    bottoms out at plain propositional satisfiability.
    """
    out = []
    n = len(info.alphabet)
    for mask in range(1 << n):
        cls = frozenset(info.alphabet[i] for i in range(n) if mask >> i & 1)
        th = theory(cls, info.alphabet, info.sigma)
        if _sat(th, cfg, cache, stats, depth + 1, root_rank) is not None:
            out.append(cls)
    return out


def _engine_sat(cfg: LogicConfig, clause: Clause, carrier: Carrier) -> OneStepModel | None:
    engine = cfg.engine
    if cfg.strategy == BOTH:
        small = engine.sat(clause, carrier, SMALL)
        wide = engine.sat(clause, carrier, CARRIER)
        if (small is None) != (wide is None):
            raise InternalCheckError(
                f"{engine.name}: small and carrier strategies disagree on a clause"
            )
        return small
    return engine.sat(clause, carrier, cfg.strategy)


def _assemble(model, signs, var_atoms, info, cfg, cache, stats) -> _Node:
    engine = cfg.engine
    if engine.children_cover_carrier:
        child_classes = set(model.carrier.classes)
    else:
        child_classes = set(engine.mentioned_points(model.structure))
    if engine.copointed and engine.designated_is_loop:
        child_classes.discard(model.designated)
    children = []
    for cls in model.carrier.sort(child_classes):
        th = theory(cls, info.alphabet, info.sigma)
        sub = cache[render(th)]
        assert sub is not None, "a used carrier class lost its witness"
        children.append((cls, sub))
    assignment = {v.name: signs[v] for v in var_atoms}
    return _Node(assignment, cfg.copointed, model, children)


# ---------------------------------------------------------------------------
# flattening into a ShallowModel

def _flatten(root: _Node, cfg: LogicConfig) -> ShallowModel:
    engine = cfg.engine
    states: list[WitnessState] = []
    edges: list[tuple[int, int]] = []

    def emit(node: _Node) -> int:
        sid = len(states)
        states.append(WitnessState(sid, dict(node.assignment), None, node.looped))
        mapping = {}
        for cls, child in node.children:
            cid = emit(child)
            mapping[cls] = cid
            edges.append((sid, cid))
        if node.looped:
            edges.append((sid, sid))
        if node.model is None:
            structure = engine.leaf_structure(sid)
        else:
            if cfg.copointed and engine.designated_is_loop:
                mapping[node.model.designated] = sid
            structure = engine.rekey(node.model.structure, mapping, sid)
        states[sid].structure = structure
        return sid

    emit(root)
    return ShallowModel(cfg.logic_id, 0, states, edges)

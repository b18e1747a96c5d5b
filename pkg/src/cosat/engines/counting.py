"""One-step engine for graded counting logic over weighted successors.

Structures assign a nonnegative integer weight to every carrier class, plus
a separate weight for the designated state itself in the copointed
variants: the frame conditions constrain the multiplicity of that
individual state, not of its class.  Clause satisfiability reduces to
integer feasibility; negated equalities and congruences are expanded
disjunctively before calling the integer back-end.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..arith import LinConstraint, LinSystem, ilp_bound_box, ilp_feasible
from ..errors import ResourceLimitError
from ..formula import CountOp
from ..onestep import CARRIER, Carrier, Clause, Engine, OneStepModel, pattern_representatives


@dataclass(frozen=True)
class CountStructure:
    """Weights keyed by carrier point, plus the designated state's own weight."""

    weights: tuple[tuple[object, int], ...]
    self_weight: int = 0

    def as_dict(self):
        return dict(self.weights)


class CountEngine(Engine):
    # only the exhaustive-carrier strategy exists: entries are pointwise
    # small, but the carrier itself is not shrunk
    supports_small = False
    supports_carrier = True
    preferred_strategy = CARRIER
    designated_is_loop = False

    def __init__(self, variant: str, box_cap: int | None = None):
        if variant not in ("plain", "reflexive", "half"):
            raise ValueError(f"bad counting variant {variant!r}")
        self.variant = variant
        self.name = {"plain": "presburger", "reflexive": "presburger-t", "half": "presburger-half"}[variant]
        self.copointed = variant != "plain"
        self.leaf_looped = self.copointed
        self.box_cap = box_cap

    def check_structure(self, structure, points, designated) -> bool:
        table = structure.as_dict()
        if any(w < 0 for w in table.values()) or structure.self_weight < 0:
            return False
        if not set(table) <= set(points):
            return False
        if self.variant == "plain":
            return structure.self_weight == 0
        if designated not in points:
            return False
        if self.variant == "reflexive":
            return structure.self_weight >= 1
        return structure.self_weight >= sum(table.values())  # half

    def eval_atom(self, structure, points, designated, op, args, visit_log=None) -> bool:
        """Single pass over the carrier, accumulating all argument sums at once."""
        assert isinstance(op, CountOp)
        table = structure.as_dict()
        sums = [0] * len(args)
        for point in points:
            if visit_log is not None:
                visit_log.append(point)
            w = table.get(point, 0)
            if point == designated:
                w += structure.self_weight
            if w:
                for i, ext in enumerate(args):
                    if point in ext:
                        sums[i] += w
        total = sum(c * s for c, s in zip(op.coeffs, sums))
        if op.rel == "<":
            return total < op.rhs
        if op.rel == ">":
            return total > op.rhs
        if op.rel == "=":
            return total == op.rhs
        return (total - op.rhs) % op.modulus == 0

    def _branches(self, atom):
        """Constraint alternatives for one signed atom (DNF expansion source)."""
        op = atom.op
        if atom.sign:
            return [(op.rel, op.rhs, op.modulus)]
        if op.rel == "<":
            return [(">=", op.rhs, None)]
        if op.rel == ">":
            return [("<=", op.rhs, None)]
        if op.rel == "=":
            return [("<", op.rhs, None), (">", op.rhs, None)]
        return [("mod", r, op.modulus) for r in range(op.modulus) if r != op.rhs]

    def sat(self, clause: Clause, carrier: Carrier, strategy: str):
        classes = pattern_representatives(carrier.classes, clause)
        index = {c: i for i, c in enumerate(classes)}
        n = len(classes)
        has_self = self.copointed
        nvars = n + (1 if has_self else 0)
        designated = carrier.designated

        def atom_coeffs(atom):
            coeffs: dict[int, int] = {}
            for c, ext in zip(atom.op.coeffs, atom.args):
                for cls in ext:
                    i = index.get(cls)
                    if i is not None:
                        coeffs[i] = coeffs.get(i, 0) + c
                if has_self and designated in ext:
                    coeffs[n] = coeffs.get(n, 0) + c
            return {i: a for i, a in coeffs.items() if a != 0}

        frame: list[LinConstraint] = []
        if self.variant == "reflexive":
            frame.append(LinConstraint({n: 1}, ">=", 1))
        elif self.variant == "half":
            coeffs = {i: -1 for i in range(n)}
            coeffs[n] = 1
            frame.append(LinConstraint(coeffs, ">=", 0))

        options = [self._branches(a) for a in clause]
        for pick in itertools.product(*options):
            sys = LinSystem(nvars, list(frame), "integer")
            degenerate = False
            for atom, (rel, rhs, modulus) in zip(clause, pick):
                coeffs = atom_coeffs(atom)
                if not coeffs:
                    if not _constant_holds(rel, rhs, modulus):
                        degenerate = True
                        break
                    continue
                sys.add(coeffs, rel, rhs, modulus)
            if degenerate:
                continue
            kwargs = {} if self.box_cap is None else {"box_cap": self.box_cap}
            point = ilp_feasible(sys, **kwargs)
            if point is not None:
                weights = tuple(
                    (classes[i], point[i]) for i in range(n) if point[i] > 0
                )
                self_w = point[n] if has_self else 0
                structure = CountStructure(weights, self_w)
                assert self.structure_size(structure) <= self._maxsize_bound(sys)
                return OneStepModel(carrier, structure)
        return None

    def _maxsize_bound(self, sys: LinSystem) -> int:
        return max(ilp_bound_box(sys), 1).bit_length()

    def mentioned_points(self, structure) -> frozenset:
        return frozenset(p for p, w in structure.weights if w > 0)

    def rekey(self, structure, mapping, self_point):
        return CountStructure(
            tuple((mapping[p], w) for p, w in structure.weights),
            structure.self_weight,
        )

    def leaf_structure(self, self_point):
        if self.variant == "reflexive":
            return CountStructure((), 1)
        return CountStructure((), 0)

    def structure_size(self, structure) -> int:
        """Maximal binary length over all stored weights."""
        entries = [w for _, w in structure.weights] + [structure.self_weight]
        return max((w.bit_length() for w in entries if w > 0), default=0)


def _constant_holds(rel, rhs, modulus) -> bool:
    if rel == "<":
        return 0 < rhs
    if rel == ">":
        return 0 > rhs
    if rel == "<=":
        return 0 <= rhs
    if rel == ">=":
        return 0 >= rhs
    if rel == "=":
        return rhs == 0
    return (0 - rhs) % modulus == 0

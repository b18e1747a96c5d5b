"""One-step engine for K (successor sets) and T (reflexive variant).

A structure is a single successor set A; a box atom over extension E holds
iff A is contained in E.  T additionally requires the designated point to
be a successor.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..formula import BoxOp
from ..onestep import CARRIER, Carrier, Clause, Engine, Extension, OneStepModel, SMALL


@dataclass(frozen=True)
class KripkeStructure:
    succ: Extension


class KripkeEngine(Engine):
    supports_small = True
    supports_carrier = True
    preferred_strategy = SMALL
    designated_is_loop = True

    def __init__(self, variant: str):
        if variant not in ("k", "t"):
            raise ValueError(f"bad kripke variant {variant!r}")
        self.variant = variant
        self.name = variant
        self.copointed = variant == "t"
        self.leaf_looped = self.copointed

    def check_structure(self, structure, points, designated) -> bool:
        if not structure.succ <= points:
            return False
        if self.variant == "t":
            return designated in structure.succ
        return True

    def eval_atom(self, structure, points, designated, op, args, visit_log=None) -> bool:
        assert isinstance(op, BoxOp)
        return structure.succ <= args[0]

    def sat(self, clause: Clause, carrier: Carrier, strategy: str):
        """Successor set from the intersection of positive extensions.

        Any model can be shrunk into that intersection without changing
        positive atoms, and negative atoms are monotone in the successor
        set, so searching this shape is complete over class carriers.
        """
        pos = [a.args[0] for a in clause if a.sign]
        neg = [a.args[0] for a in clause if not a.sign]
        a0 = carrier.class_set
        for e in pos:
            a0 &= e
        if self.variant == "t" and carrier.designated not in a0:
            return None
        witnesses = []
        for e in neg:
            pool = a0 - e
            if not pool:
                return None
            witnesses.append(carrier.least(pool))
        if strategy == CARRIER:
            return OneStepModel(carrier, KripkeStructure(frozenset(a0)))
        succ = set(witnesses)
        if self.variant == "t":
            succ.add(carrier.designated)
        small = carrier.restrict(succ)
        bound = self.small_bound_of(clause)
        assert len(small.classes) <= bound, "small successor set exceeds its bound"
        return OneStepModel(small, KripkeStructure(frozenset(succ)))

    def small_bound_of(self, clause: Clause) -> int:
        negs = sum(1 for a in clause if not a.sign)
        return negs + (1 if self.variant == "t" else 0)

    def small_bound(self, n_atoms: int) -> int:
        return n_atoms + (1 if self.variant == "t" else 0)

    def mentioned_points(self, structure) -> frozenset:
        return structure.succ

    def rekey(self, structure, mapping, self_point):
        return KripkeStructure(frozenset(mapping[p] for p in structure.succ))

    def leaf_structure(self, self_point):
        if self.variant == "t":
            return KripkeStructure(frozenset([self_point]))
        return KripkeStructure(frozenset())

    def structure_size(self, structure) -> int:
        return len(structure.succ)

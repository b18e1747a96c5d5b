"""One-step engine for CK, CK+ID and CK+MP over partial conditional maps.

Structures are partial maps from antecedent extensions to value sets; the
variant fixes the default on undefined antecedents: the empty set for ck
and ckid, and P intersected with the designated point for ckmp.  Those
defaults are what keep the frame checks polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..formula import CondOp
from ..onestep import CARRIER, Carrier, Clause, Engine, Extension, OneStepModel, SMALL


@dataclass(frozen=True)
class CondStructure:
    """Entries sorted for determinism; keys are antecedent extensions."""

    entries: tuple[tuple[Extension, Extension], ...]

    def as_dict(self):
        return dict(self.entries)


class CondEngine(Engine):
    supports_small = True
    supports_carrier = True
    preferred_strategy = SMALL
    designated_is_loop = True

    def __init__(self, variant: str):
        if variant not in ("ck", "ckid", "ckmp"):
            raise ValueError(f"bad conditional variant {variant!r}")
        self.variant = variant
        self.name = variant
        self.copointed = variant == "ckmp"
        self.leaf_looped = self.copointed

    def value(self, structure, antecedent: Extension, designated) -> Extension:
        table = structure.as_dict()
        if antecedent in table:
            return table[antecedent]
        if self.variant == "ckmp":
            return antecedent & frozenset([designated])
        return frozenset()

    def check_structure(self, structure, points, designated) -> bool:
        for key, val in structure.entries:
            if not key <= points or not val <= points:
                return False
            if self.variant == "ckid" and not val <= key:
                return False
            if self.variant == "ckmp" and designated in key and designated not in val:
                return False
        return True

    def eval_atom(self, structure, points, designated, op, args, visit_log=None) -> bool:
        assert isinstance(op, CondOp)
        antecedent, consequent = args
        return self.value(structure, antecedent, designated) <= consequent

    def sat(self, clause: Clause, carrier: Carrier, strategy: str):
        """Group atoms into cells by antecedent extension and solve cellwise.

        Antecedents with equal extensions over the carrier are semantically
        equal in every reachable model, so merging their constraints is
        complete; the small strategy re-separates distinct cells with one
        symmetric-difference point per pair so the shrunk keys stay distinct.
        """
        designated = carrier.designated
        full = carrier.class_set
        cells: dict[Extension, tuple[list, list]] = {}
        for a in clause:
            p, q = a.args
            pos, neg = cells.setdefault(p, ([], []))
            (pos if a.sign else neg).append(q)

        allow: dict[Extension, frozenset] = {}
        witnesses: dict[Extension, list] = {}
        for p, (pos, neg) in cells.items():
            al = full
            for q in pos:
                al &= q
            if self.variant == "ckid":
                al &= p
            if self.variant == "ckmp" and designated in p and designated not in al:
                return None
            wits = []
            for q in neg:
                pool = al - q
                if not pool:
                    return None
                wits.append(carrier.least(pool))
            allow[p] = al
            witnesses[p] = wits

        if strategy == CARRIER:
            entries = {p: allow[p] for p in cells}
            return OneStepModel(carrier, self._pack(entries, carrier))

        values: dict[Extension, frozenset] = {}
        for p in cells:
            val = set(witnesses[p])
            if self.variant == "ckmp" and designated in p:
                val.add(designated)
            values[p] = frozenset(val)
        keep: set = set()
        for v in values.values():
            keep |= v
        keys = list(cells)
        for p1 in keys:
            for p2 in keys:
                if p1 is not p2 and p1 - p2:
                    keep.add(carrier.least(p1 - p2))
        if self.copointed:
            keep.add(designated)
        small = carrier.restrict(keep)
        bound = self.small_bound(len(clause))
        assert len(small.classes) <= bound, "small carrier exceeds its bound"
        ks = small.class_set
        entries = {p & ks: values[p] for p in cells}
        assert len(entries) == len(cells), "shrunk antecedent cells collided"
        return OneStepModel(small, self._pack(entries, carrier))

    def _pack(self, entries: dict, carrier: Carrier) -> CondStructure:
        def ext_key(e: Extension):
            return tuple(sorted(carrier.key(c) for c in e))

        return CondStructure(
            tuple(sorted(entries.items(), key=lambda kv: ext_key(kv[0])))
        )

    def small_bound(self, n_atoms: int) -> int:
        return n_atoms * n_atoms + n_atoms

    def mentioned_points(self, structure) -> frozenset:
        out: set = set()
        for key, val in structure.entries:
            out |= key
            out |= val
        return frozenset(out)

    def rekey(self, structure, mapping, self_point):
        return CondStructure(
            tuple(
                (
                    frozenset(mapping[p] for p in key),
                    frozenset(mapping[p] for p in val),
                )
                for key, val in structure.entries
            )
        )

    def leaf_structure(self, self_point):
        return CondStructure(())

    def structure_size(self, structure) -> int:
        return sum(len(k) + len(v) + 1 for k, v in structure.entries)

"""One-step engine for the logic of agency over 3-valued neighborhoods.

A structure is a partial map from extensions to {bot, star, top}; the total
map it represents sends A to the best value achievable by intersecting
defined supersets of A down to exactly A (closure evaluation).  That
representation satisfies the meet condition by construction; the remaining
frame conditions are: the full carrier gets bot, sets valued above bot have
a common point, and top-valued sets contain the designated point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..formula import AgencyOp
from ..onestep import CARRIER, Carrier, Clause, Engine, Extension, OneStepModel, SMALL

BOT, STAR, TOP = 0, 1, 2
_VALUE_NAMES = {BOT: "bot", STAR: "star", TOP: "top"}


@dataclass(frozen=True)
class AgencyStructure:
    """Entries with value above bot, sorted for determinism."""

    entries: tuple[tuple[Extension, int], ...]

    def as_dict(self):
        return dict(self.entries)


def closure_eval(entries: dict, ext: Extension) -> int:
    """Value of the represented total map at ``ext``.

    For each candidate value from top down: the defined supersets of ext
    at or above that value must intersect to exactly ext.
    """
    for b in (TOP, STAR):
        members = [key for key, v in entries.items() if v >= b and ext <= key]
        if members:
            inter = members[0]
            for m in members[1:]:
                inter = inter & m
            if inter == ext:
                return b
    return BOT


class AgencyEngine(Engine):
    supports_small = True
    supports_carrier = True
    preferred_strategy = SMALL
    designated_is_loop = True
    children_cover_carrier = True
    copointed = True
    leaf_looped = True
    name = "agency"

    def check_structure(self, structure, points, designated) -> bool:
        entries = structure.as_dict()
        above = [key for key, v in entries.items() if v > BOT]
        for key, v in entries.items():
            if not key <= points:
                return False
            if v > BOT and key == points:
                return False  # the full set must stay at bot
            if v == TOP and designated not in key:
                return False
        if above:
            inter = above[0]
            for m in above[1:]:
                inter = inter & m
            if not inter:
                return False
        return designated in points

    def eval_atom(self, structure, points, designated, op, args, visit_log=None) -> bool:
        assert isinstance(op, AgencyOp)
        v = closure_eval(structure.as_dict(), args[0])
        return v == TOP if op.kind == "E" else v != BOT

    def sat(self, clause: Clause, carrier: Carrier, strategy: str):
        """Search cell-value assignments within the intervals the signs allow.

        Values are not chosen greedily: the closure can raise a value on an
        intersection and break an upper bound non-locally, so all
        interval-consistent assignments are explored (at most 3 per cell).
        """
        designated = carrier.designated
        full = carrier.class_set
        cells: list[Extension] = []
        lo: dict[Extension, int] = {}
        hi: dict[Extension, int] = {}
        for a in clause:
            p = a.args[0]
            if p not in lo:
                cells.append(p)
                lo[p], hi[p] = BOT, TOP
            assert isinstance(a.op, AgencyOp)
            if a.op.kind == "E":
                if a.sign:
                    lo[p] = max(lo[p], TOP)
                else:
                    hi[p] = min(hi[p], STAR)
            else:
                if a.sign:
                    lo[p] = max(lo[p], STAR)
                else:
                    hi[p] = min(hi[p], BOT)
        if any(lo[p] > hi[p] for p in cells):
            return None

        ranges = [range(lo[p], hi[p] + 1) for p in cells]
        for choice in itertools.product(*ranges):
            val = dict(zip(cells, choice))
            entries = {p: v for p, v in val.items() if v > BOT}
            if self._admissible(entries, val, full, designated):
                if strategy == CARRIER:
                    return OneStepModel(carrier, self._pack(entries, carrier))
                return self._shrink(entries, val, clause, carrier)
        return None

    def _admissible(self, entries, val, full, designated) -> bool:
        if any(key == full for key in entries):
            return False
        if entries:
            inter = None
            for key in entries:
                inter = key if inter is None else inter & key
            if not inter:
                return False
        for key, v in entries.items():
            if v == TOP and designated not in key:
                return False
        return all(closure_eval(entries, p) == v for p, v in val.items())

    def _shrink(self, entries, val, clause, carrier: Carrier):
        """Small carrier: the designated point, pair separators, one closure
        separator per upper-bounded cell, a common witness for the meet
        point, and a guard against a cell swallowing the whole carrier."""
        designated = carrier.designated
        full = carrier.class_set
        keep = {designated}
        cells = list(val)
        for p1 in cells:
            for p2 in cells:
                if p1 is not p2 and p1 - p2:
                    keep.add(carrier.least(p1 - p2))
        for p, v in val.items():
            if v < TOP:
                members = [k for k, w in entries.items() if w >= v + 1 and p <= k]
                if members:
                    inter = members[0]
                    for m in members[1:]:
                        inter = inter & m
                    keep.add(carrier.least(inter - p))
        if entries:
            inter = None
            for key in entries:
                inter = key if inter is None else inter & key
            keep.add(carrier.least(inter))
        for key in sorted(entries, key=lambda e: tuple(sorted(carrier.key(c) for c in e))):
            if not (keep - key):
                keep.add(carrier.least(full - key))
        small = carrier.restrict(keep)
        n = len(clause)
        assert len(small.classes) <= n * n + n + 2, "small carrier exceeds its bound"
        ks = small.class_set
        shrunk = {key & ks: v for key, v in entries.items()}
        assert len(shrunk) == len(entries), "shrunk neighborhood keys collided"
        assert all(closure_eval(shrunk, p & ks) == v for p, v in val.items()), (
            "carrier shrinking changed a closure value"
        )
        return OneStepModel(small, self._pack(shrunk, carrier))

    def _pack(self, entries: dict, carrier: Carrier) -> AgencyStructure:
        def ext_key(e: Extension):
            return tuple(sorted(carrier.key(c) for c in e))

        return AgencyStructure(
            tuple(sorted(entries.items(), key=lambda kv: ext_key(kv[0])))
        )

    def small_bound(self, n_atoms: int) -> int:
        return n_atoms * n_atoms + n_atoms + 2

    def mentioned_points(self, structure) -> frozenset:
        out: set = set()
        for key, _ in structure.entries:
            out |= key
        return frozenset(out)

    def rekey(self, structure, mapping, self_point):
        return AgencyStructure(
            tuple(
                (frozenset(mapping[p] for p in key), v)
                for key, v in structure.entries
            )
        )

    def leaf_structure(self, self_point):
        return AgencyStructure(())

    def structure_size(self, structure) -> int:
        return sum(len(k) + 1 for k, _ in structure.entries)

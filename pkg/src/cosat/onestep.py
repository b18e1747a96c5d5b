"""Shared single-layer machinery: class carriers, extensions, clauses, and
the contract every logic engine implements.

Carrier points are truth assignments over the alphabet (sets of alphabet
letters); every engine's semantics factors through per-class data, so class
carriers lose no generality (the class-merging property is tested per
engine).  Engines are stateless and work over arbitrary hashable points, so
the same evaluation code serves both one-step models (points are classes)
and full witness models (points are state ids).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable

from .errors import InternalCheckError
from .formula import And, Formula, Modal, ModalOp, Not, eval_under, true

PointClass = frozenset  # of alphabet letters (Formula)
Extension = frozenset  # of carrier points

SMALL = "small"
CARRIER = "carrier"


@dataclass(frozen=True)
class Carrier:
    """A finite set of point classes with an optional designated point."""

    alphabet: tuple[Formula, ...]
    classes: tuple[PointClass, ...]
    designated: PointClass | None = None

    def __post_init__(self):
        if self.designated is not None and self.designated not in self.classes:
            raise ValueError("designated point must belong to the carrier")

    @property
    def class_set(self) -> frozenset:
        return frozenset(self.classes)

    def key(self, pc: PointClass) -> int:
        """Deterministic sort key: the characteristic bitmask of a class."""
        return sum(1 << i for i, a in enumerate(self.alphabet) if a in pc)

    def sort(self, classes: Iterable[PointClass]) -> list[PointClass]:
        return sorted(classes, key=self.key)

    def least(self, classes: Iterable[PointClass]) -> PointClass:
        return min(classes, key=self.key)

    def restrict(self, keep: Iterable[PointClass]) -> "Carrier":
        keep = set(keep)
        if self.designated is not None and self.designated not in keep:
            raise ValueError("restriction must keep the designated point")
        return Carrier(
            self.alphabet,
            tuple(c for c in self.classes if c in keep),
            self.designated,
        )


@dataclass(frozen=True)
class ClauseAtom:
    """A signed modal atom with its argument extensions over a carrier."""

    sign: bool
    op: ModalOp
    args: tuple[Extension, ...]

    def __post_init__(self):
        if len(self.args) != self.op.arity:
            raise ValueError("argument count does not match operator arity")


Clause = tuple[ClauseAtom, ...]


def extension(phi: Formula, carrier: Carrier) -> Extension:
    """Classes of the carrier under which ``phi`` evaluates to true.

    ``phi`` may only mention alphabet letters (composite members of the
    alphabet's modal scopes are derived boolean-wise from letters).
    """
    letters = set(carrier.alphabet)
    out = []
    for cls in carrier.classes:
        signs = {a: (a in cls) for a in letters}
        if eval_under(phi, signs):
            out.append(cls)
    return frozenset(out)


def theory(cls: PointClass, alphabet: tuple[Formula, ...], sigma) -> Formula:
    """The conjunction selecting exactly this class: each letter or its negation."""
    f: Formula | None = None
    for a in alphabet:
        lit = sigma[a] if a in cls else Not(sigma[a])
        f = lit if f is None else And(f, lit)
    return f if f is not None else true()


def restrict_clause(clause: Clause, keep: frozenset) -> Clause:
    """Intersect every argument extension with a shrunk carrier."""
    return tuple(
        ClauseAtom(a.sign, a.op, tuple(e & keep for e in a.args)) for a in clause
    )


def pattern_representatives(classes, clause: Clause) -> list:
    """One class per membership pattern across all argument extensions.

    Classes a clause cannot tell apart are interchangeable: folding their
    weight or mass onto a single representative changes no atom sum, so the
    numeric engines solve over representatives only.
    """
    reps = []
    seen = set()
    for cls in classes:
        pat = tuple(cls in ext for atom in clause for ext in atom.args)
        if pat not in seen:
            seen.add(pat)
            reps.append(cls)
    return reps


class Engine(ABC):
    """Per-logic successor-structure semantics.

    Implementations are stateless; ``points`` arguments are the carrier the
    structure lives over (classes or state ids) and ``designated`` is the
    distinguished point for copointed variants, None otherwise.
    """

    name: str
    copointed: bool
    supports_small: bool
    supports_carrier: bool
    preferred_strategy: str
    # True when the designated point inside extensions is realised by the
    # witness root's own loop; False when the structure carries a separate
    # self component (counting and probability weights).
    designated_is_loop: bool
    # leaf witness states of this logic carry a loop edge
    leaf_looped: bool
    # witness states need a child for every carrier point, not only the
    # points the structure mentions (needed when a frame condition, like the
    # full-set bound of the agency logic, is relative to the whole carrier)
    children_cover_carrier: bool = False

    @abstractmethod
    def check_structure(self, structure, points: frozenset, designated) -> bool:
        """Frame condition of the variant over the given points."""

    @abstractmethod
    def eval_atom(self, structure, points, designated, op, args, visit_log=None) -> bool:
        """Truth of one unsigned atom at this structure."""

    @abstractmethod
    def sat(self, clause: Clause, carrier: Carrier, strategy: str):
        """A OneStepModel satisfying the clause, or None."""

    @abstractmethod
    def mentioned_points(self, structure) -> frozenset:
        """Every point the structure references."""

    @abstractmethod
    def rekey(self, structure, mapping: dict, self_point):
        """Transport the structure along a point renaming (classes to ids)."""

    @abstractmethod
    def leaf_structure(self, self_point):
        """Structure of a childless witness state (with a loop where needed)."""

    @abstractmethod
    def structure_size(self, structure) -> int:
        """Representation size used for diagnostics and bound checks."""

    def small_bound(self, n_atoms: int) -> int | None:
        """Carrier bound of the small strategy as a function of clause size."""
        return None


@dataclass(frozen=True)
class OneStepModel:
    carrier: Carrier
    structure: object

    @property
    def designated(self):
        return self.carrier.designated


def model_check_clause(engine: Engine, model: OneStepModel, clause: Clause) -> bool:
    """Every positive atom holds and every negative one fails at the model."""
    points = model.carrier.class_set
    if not engine.check_structure(model.structure, points, model.designated):
        raise InternalCheckError(
            f"{engine.name}: one-step structure violates its frame condition"
        )
    return all(
        engine.eval_atom(model.structure, points, model.designated, a.op, a.args)
        == a.sign
        for a in clause
    )

"""One-step engine for probabilistic logic over finite distributions.

Structures assign rational masses to carrier classes (plus a separate mass
for the designated state in the stationary variant); masses always sum to
one exactly.  Clause satisfiability is rational feasibility: positive
atoms become weak inequalities, negated ones strict reversals, and on
success the support of the witness distribution is minimised.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..arith import LinSystem, lp_feasible, minimize_support
from ..formula import LikelihoodOp
from ..onestep import (
    CARRIER,
    Carrier,
    Clause,
    Engine,
    OneStepModel,
    SMALL,
    pattern_representatives,
)


@dataclass(frozen=True)
class ProbStructure:
    masses: tuple[tuple[object, Fraction], ...]
    self_mass: Fraction = Fraction(0)

    def as_dict(self):
        return dict(self.masses)


class ProbEngine(Engine):
    supports_small = True  # small = carrier solution with minimised support
    supports_carrier = True
    preferred_strategy = SMALL
    designated_is_loop = False

    def __init__(self, stationary: Fraction | None = None):
        if stationary is not None and not 0 <= stationary <= 1:
            raise ValueError("stationary mass bound must lie in [0, 1]")
        self.stationary = stationary
        self.copointed = stationary is not None
        self.name = "prob" if stationary is None else f"prob-stat:{stationary}"
        self.leaf_looped = True  # a childless state keeps all mass on itself

    def check_structure(self, structure, points, designated) -> bool:
        table = structure.as_dict()
        if any(m < 0 for m in table.values()) or structure.self_mass < 0:
            return False
        if not set(table) <= set(points):
            return False
        if sum(table.values(), structure.self_mass) != 1:
            return False
        if self.copointed:
            if designated not in points:
                return False
            if structure.self_mass < self.stationary:
                return False
        return True

    def eval_atom(self, structure, points, designated, op, args, visit_log=None) -> bool:
        """Single pass over the carrier, accumulating all argument masses at once."""
        assert isinstance(op, LikelihoodOp)
        table = structure.as_dict()
        sums = [Fraction(0)] * len(args)
        for point in points:
            if visit_log is not None:
                visit_log.append(point)
            m = table.get(point, Fraction(0))
            if point == designated:
                m += structure.self_mass
            if m:
                for i, ext in enumerate(args):
                    if point in ext:
                        sums[i] += m
        return sum(c * s for c, s in zip(op.coeffs, sums)) >= op.bound

    def sat(self, clause: Clause, carrier: Carrier, strategy: str):
        classes = pattern_representatives(carrier.classes, clause)
        index = {c: i for i, c in enumerate(classes)}
        n = len(classes)
        has_self = self.copointed
        nvars = n + (1 if has_self else 0)
        designated = carrier.designated

        sys = LinSystem(nvars, [], "rational")
        sys.add({i: Fraction(1) for i in range(nvars)}, "=", Fraction(1))
        if has_self:
            sys.add({n: Fraction(1)}, ">=", self.stationary)
        for atom in clause:
            coeffs: dict[int, Fraction] = {}
            for c, ext in zip(atom.op.coeffs, atom.args):
                for cls in ext:
                    i = index.get(cls)
                    if i is not None:
                        coeffs[i] = coeffs.get(i, Fraction(0)) + c
                if has_self and designated in ext:
                    coeffs[n] = coeffs.get(n, Fraction(0)) + c
            coeffs = {i: a for i, a in coeffs.items() if a != 0}
            if not coeffs:
                holds = 0 >= atom.op.bound
                if holds != atom.sign:
                    return None
                continue
            sys.add(coeffs, ">=" if atom.sign else "<", atom.op.bound)
        point = lp_feasible(sys)
        if point is None:
            return None
        if strategy != CARRIER:
            point = minimize_support(sys, point)
            support = sum(1 for x in point if x != 0)
            assert support <= len(clause) + 2, "support exceeds its bound"
        masses = tuple((classes[i], point[i]) for i in range(n) if point[i] != 0)
        self_m = point[n] if has_self else Fraction(0)
        structure = ProbStructure(masses, self_m)
        if strategy == CARRIER:
            return OneStepModel(carrier, structure)
        keep = {classes[i] for i in range(n) if point[i] != 0}
        if has_self:
            keep.add(designated)
        return OneStepModel(carrier.restrict(keep), structure)

    def small_bound(self, n_atoms: int) -> int:
        return n_atoms + 2

    def mentioned_points(self, structure) -> frozenset:
        return frozenset(p for p, m in structure.masses if m != 0)

    def rekey(self, structure, mapping, self_point):
        return ProbStructure(
            tuple((mapping[p], m) for p, m in structure.masses),
            structure.self_mass,
        )

    def leaf_structure(self, self_point):
        if self.copointed:
            return ProbStructure((), Fraction(1))
        return ProbStructure(((self_point, Fraction(1)),), Fraction(0))

    def structure_size(self, structure) -> int:
        """Maximal binary length over stored numerators and denominators."""
        vals = [m for _, m in structure.masses] + [structure.self_mass]
        return max(
            (
                max(abs(m.numerator), 1).bit_length() + m.denominator.bit_length()
                for m in vals
                if m != 0
            ),
            default=0,
        )

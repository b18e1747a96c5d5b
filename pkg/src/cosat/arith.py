"""Exact linear-arithmetic feasibility back-ends.

Rational systems (with strict inequalities) are decided by Fourier-Motzkin
elimination with strictness tracking; nonnegative-integer systems (with
congruences) by branch and bound with rational-relaxation pruning.  All
arithmetic is exact: no floating point anywhere in this module.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ResourceLimitError

Rat = Fraction

DEFAULT_ILP_BOX_CAP = 10**7

_RELS = ("<", "<=", "=", ">=", ">", "mod")


@dataclass
class LinConstraint:
    """Sum of coeffs[i]*x_i related to rhs; 'mod' asserts lhs = rhs (mod modulus)."""

    coeffs: dict[int, Fraction | int]
    rel: str
    rhs: Fraction | int
    modulus: int | None = None

    def __post_init__(self):
        if self.rel not in _RELS:
            raise ValueError(f"bad relation {self.rel!r}")
        if self.rel == "mod":
            if self.modulus is None or self.modulus < 1:
                raise ValueError("modulus must be >= 1")
            if not 0 <= self.rhs < self.modulus:
                raise ValueError("residue must satisfy 0 <= r < k")
        elif self.modulus is not None:
            raise ValueError("modulus only allowed with rel 'mod'")


@dataclass
class LinSystem:
    """Constraints over nonnegative variables 0..nvars-1.

    ``domain`` is 'rational' or 'integer'; congruences are admitted only in
    integer systems.
    """

    nvars: int
    constraints: list[LinConstraint] = field(default_factory=list)
    domain: str = "rational"

    def __post_init__(self):
        if self.domain not in ("rational", "integer"):
            raise ValueError(f"bad domain {self.domain!r}")
        for c in self.constraints:
            if any(not 0 <= v < self.nvars for v in c.coeffs):
                raise ValueError("constraint references undeclared variable")
            if c.rel == "mod" and self.domain != "integer":
                raise ValueError("congruences require integer domain")

    def add(self, coeffs: dict[int, Fraction | int], rel: str, rhs, modulus=None) -> None:
        c = LinConstraint(coeffs, rel, rhs, modulus)
        if any(not 0 <= v < self.nvars for v in c.coeffs):
            raise ValueError("constraint references undeclared variable")
        self.constraints.append(c)


def satisfies(sys: LinSystem, point) -> bool:
    """Exact check of every constraint at ``point`` (nonnegativity included)."""
    if len(point) != sys.nvars or any(x < 0 for x in point):
        return False
    for c in sys.constraints:
        lhs = sum(Fraction(a) * point[v] for v, a in c.coeffs.items())
        if c.rel == "<" and not lhs < c.rhs:
            return False
        if c.rel == "<=" and not lhs <= c.rhs:
            return False
        if c.rel == "=" and lhs != c.rhs:
            return False
        if c.rel == ">=" and not lhs >= c.rhs:
            return False
        if c.rel == ">" and not lhs > c.rhs:
            return False
        if c.rel == "mod":
            if lhs.denominator != 1 or (int(lhs) - c.rhs) % c.modulus != 0:
                return False
    return True


# ---------------------------------------------------------------------------
# rational feasibility: Fourier-Motzkin with strictness tracking

@dataclass
class _Row:
    # sum coef[v]*x_v <= rhs  (< when strict)
    coef: dict[int, Fraction]
    rhs: Fraction
    strict: bool


def _rows_of(sys: LinSystem) -> list[_Row] | None:
    """Normalize to <=/< rows plus nonnegativity; None on a constant clash."""
    rows: list[_Row] = []

    def push(coef, rhs, strict):
        coef = {v: Fraction(a) for v, a in coef.items() if a != 0}
        rhs = Fraction(rhs)
        if not coef:
            if rhs < 0 or (strict and rhs == 0):
                return False
            return True
        rows.append(_Row(coef, rhs, strict))
        return True

    for c in sys.constraints:
        if c.rel == "mod":
            raise ValueError("congruence in rational system")
        neg = {v: -Fraction(a) for v, a in c.coeffs.items()}
        ok = True
        if c.rel in ("<", "<="):
            ok = push(c.coeffs, c.rhs, c.rel == "<")
        elif c.rel in (">", ">="):
            ok = push(neg, -Fraction(c.rhs), c.rel == ">")
        else:  # =
            ok = push(c.coeffs, c.rhs, False) and push(neg, -Fraction(c.rhs), False)
        if not ok:
            return None
    for v in range(sys.nvars):
        rows.append(_Row({v: Fraction(-1)}, Fraction(0), False))
    return rows


def _drop_dominated(rows: list[_Row]) -> list[_Row]:
    """Among rows with a common normalized direction keep only the tightest.

    Rows are scaled so their first coefficient is +-1; a smaller bound (or a
    strict one at an equal bound) implies the rest.
    """
    best: dict[tuple, _Row] = {}
    for r in rows:
        items = sorted(r.coef.items())
        scale = abs(items[0][1])
        key = tuple((v, a / scale) for v, a in items)
        scaled_rhs = r.rhs / scale
        cur = best.get(key)
        if (
            cur is None
            or scaled_rhs < cur.rhs / abs(sorted(cur.coef.items())[0][1])
            or (
                scaled_rhs == cur.rhs / abs(sorted(cur.coef.items())[0][1])
                and r.strict
                and not cur.strict
            )
        ):
            best[key] = r
    return list(best.values())


def lp_feasible(sys: LinSystem) -> list[Fraction] | None:
    """A rational point satisfying the system, or None iff it is infeasible.

    Variables are eliminated in declaration order; the witness is extracted
    by back-substitution, taking the lower endpoint of each interval when it
    is attainable and the midpoint of open intervals otherwise.
    """
    if sys.domain != "rational":
        raise ValueError("lp_feasible expects a rational system")
    rows = _rows_of(sys)
    if rows is None:
        return None
    n = sys.nvars
    stages: list[list[_Row]] = []
    for j in range(n):
        with_j = [r for r in rows if j in r.coef]
        rest = [r for r in rows if j not in r.coef]
        stages.append(with_j)
        uppers = [r for r in with_j if r.coef[j] > 0]
        lowers = [r for r in with_j if r.coef[j] < 0]
        for lo in lowers:
            for up in uppers:
                a, b = up.coef[j], -lo.coef[j]
                coef = {
                    v: b * up.coef.get(v, Fraction(0)) + a * lo.coef.get(v, Fraction(0))
                    for v in set(up.coef) | set(lo.coef)
                    if v != j
                }
                coef = {v: x for v, x in coef.items() if x != 0}
                rhs = b * up.rhs + a * lo.rhs
                strict = up.strict or lo.strict
                if not coef:
                    if rhs < 0 or (strict and rhs == 0):
                        return None
                    continue
                rest.append(_Row(coef, rhs, strict))
        rows = _drop_dominated(rest)
    # all remaining rows are constant and were checked on creation
    x: list[Fraction] = [Fraction(0)] * n
    for j in reversed(range(n)):
        lo_val, lo_strict = None, False
        hi_val, hi_strict = None, False
        for r in stages[j]:
            rest = r.rhs - sum(a * x[v] for v, a in r.coef.items() if v != j)
            bound = rest / r.coef[j]
            if r.coef[j] > 0:
                if hi_val is None or bound < hi_val:
                    hi_val, hi_strict = bound, r.strict
                elif bound == hi_val:
                    hi_strict = hi_strict or r.strict
            else:
                if lo_val is None or bound > lo_val:
                    lo_val, lo_strict = bound, r.strict
                elif bound == lo_val:
                    lo_strict = lo_strict or r.strict
        assert lo_val is not None  # nonnegativity row always present
        if not lo_strict:
            x[j] = lo_val
        elif hi_val is None:
            x[j] = lo_val + 1
        else:
            x[j] = (lo_val + hi_val) / 2
    assert satisfies(sys, x), "back-substitution produced an invalid point"
    return x


# ---------------------------------------------------------------------------
# integer feasibility: branch and bound with LP pruning

def ilp_bound_box(sys: LinSystem) -> int:
    """Per-coordinate search bound; solutions, when any exist, fit in the box."""
    m = len(sys.constraints)
    n = sys.nvars
    maxc = max((abs(int(a)) for c in sys.constraints for a in c.coeffs.values()), default=0)
    maxr = max((abs(int(c.rhs)) for c in sys.constraints), default=0)
    mods = [c.modulus for c in sys.constraints if c.rel == "mod"]
    l = math.lcm(*mods) if mods else 1
    return ((m + n) * (1 + maxc + maxr)) ** 2 * l


def _int_normalized(sys: LinSystem) -> list[LinConstraint]:
    """Rewrite strict relations using integrality: > b becomes >= b+1."""
    out = []
    for c in sys.constraints:
        if c.rel == "<":
            out.append(LinConstraint(c.coeffs, "<=", int(c.rhs) - 1))
        elif c.rel == ">":
            out.append(LinConstraint(c.coeffs, ">=", int(c.rhs) + 1))
        else:
            out.append(c)
    return out


_JOINT_SCAN_CAP = 100_000


def _joint_residues_possible(cons: list[LinConstraint], n: int) -> bool:
    """Necessary residue-vector check: congruences plus the congruences every
    equality induces modulo the lcm; False means certainly infeasible."""
    mods = [c.modulus for c in cons if c.rel == "mod"]
    if not mods:
        return True
    l = math.lcm(*mods)
    if l**n > _JOINT_SCAN_CAP:
        return True
    derived = [(c.coeffs, int(c.rhs), c.modulus) for c in cons if c.rel == "mod"]
    derived += [(c.coeffs, int(c.rhs), l) for c in cons if c.rel == "="]
    for vec in itertools.product(range(l), repeat=n):
        if all(
            (sum(int(a) * vec[v] for v, a in coeffs.items()) - rhs) % m == 0
            for coeffs, rhs, m in derived
        ):
            return True
    return False


def ilp_feasible(sys: LinSystem, box_cap: int = DEFAULT_ILP_BOX_CAP) -> list[int] | None:
    """A nonnegative-integer point satisfying the system, or None.

    Branch and bound over variables in declaration order, smaller values
    first; a rational relaxation prunes both individual values and whole
    tails, equalities whose support is exhausted force values outright, and
    congruences step the candidates by their modulus once the rest of their
    support is fixed.  All constraints are re-checked exactly at integer
    leaves.  Raises ResourceLimitError when the solution box exceeds
    ``box_cap``.
    """
    if sys.domain != "integer":
        raise ValueError("ilp_feasible expects an integer system")
    for c in sys.constraints:
        for a in c.coeffs.values():
            if Fraction(a).denominator != 1:
                raise ValueError("integer system has non-integer coefficient")
    box = ilp_bound_box(sys)
    if box > box_cap:
        raise ResourceLimitError(
            f"integer search box {box} exceeds configured cap {box_cap}"
        )
    cons = _int_normalized(sys)
    n = sys.nvars
    plain = [c for c in cons if c.rel != "mod"]
    congs = [c for c in cons if c.rel == "mod"]
    equalities = [c for c in cons if c.rel == "="]
    checker = LinSystem(n, cons, "integer")

    # reachable residues of a sum over nonnegative integers form the
    # subgroup generated by its coefficients
    for c in congs:
        g = math.gcd(c.modulus, *[abs(int(a)) for a in c.coeffs.values()])
        if int(c.rhs) % g != 0:
            return None
    for c1, c2 in itertools.combinations(congs, 2):
        if c1.coeffs == c2.coeffs:
            g = math.gcd(c1.modulus, c2.modulus)
            if (int(c1.rhs) - int(c2.rhs)) % g != 0:
                return None
    if not _joint_residues_possible(cons, n):
        return None

    def gcd_gap(c: LinConstraint) -> bool:
        g = math.gcd(*[abs(int(a)) for a in c.coeffs.values()])
        return g > 0 and int(c.rhs) % g != 0

    if any(gcd_gap(c) for c in equalities):
        return None

    def residues(j: int, fixed: list[int]) -> tuple[int, list[int]] | None:
        """Admissible residues of x_j under every congruence whose other
        variables are already fixed."""
        live = [c for c in congs if j in c.coeffs and set(c.coeffs) <= set(range(j + 1))]
        if not live:
            return 1, [0]
        l = math.lcm(*[c.modulus for c in live])
        ok = []
        for r in range(l):
            good = True
            for c in live:
                total = int(c.coeffs[j]) * r + sum(
                    int(a) * fixed[v] for v, a in c.coeffs.items() if v != j
                )
                if (total - int(c.rhs)) % c.modulus != 0:
                    good = False
                    break
            if good:
                ok.append(r)
        if not ok:
            return None
        return l, ok

    def forced_value(j: int, fixed: list[int]) -> tuple[bool, int | None]:
        """(consistent, value) from equalities fully supported at x_j."""
        forced: int | None = None
        for c in equalities:
            if j not in c.coeffs or not set(c.coeffs) <= set(range(j + 1)):
                continue
            rest = int(c.rhs) - sum(
                int(a) * fixed[v] for v, a in c.coeffs.items() if v != j
            )
            a_j = int(c.coeffs[j])
            if rest % a_j != 0:
                return False, None
            v = rest // a_j
            if v < 0:
                return False, None
            if forced is not None and forced != v:
                return False, None
            forced = v
        return True, forced

    def relax(fixed: list[int], extra: LinConstraint | None) -> bool:
        """Rational feasibility of the remaining system given a fixed prefix."""
        k = len(fixed)
        rel = LinSystem(n - k, [], "rational")
        rows = plain + ([extra] if extra else [])
        for c in rows:
            coeffs = {}
            rhs = Fraction(c.rhs)
            for v, a in c.coeffs.items():
                if v < k:
                    rhs -= Fraction(a) * fixed[v]
                else:
                    coeffs[v - k] = Fraction(a)
            if not coeffs:
                if not _constant_relation(c.rel, rhs):
                    return False
                continue
            rel.add(coeffs, c.rel, rhs)
        for v in range(n - k):
            rel.add({v: 1}, "<=", box)
        return lp_feasible(rel) is not None

    def go(fixed: list[int]) -> list[int] | None:
        j = len(fixed)
        if j == n:
            return list(fixed) if satisfies(checker, fixed) else None
        consistent, forced = forced_value(j, fixed)
        if not consistent:
            return None
        stepping = residues(j, fixed)
        if stepping is None:
            return None
        l, ok = stepping
        if forced is not None:
            candidates = [forced] if (forced % l) in ok and forced <= box else []
            for v in candidates:
                if relax(fixed + [v], None):
                    return go(fixed + [v])
            return None
        base = 0
        while base <= box:
            for r in ok:
                v = base + r
                if v > box:
                    break
                if not relax(fixed, LinConstraint({j: 1}, ">=", v)):
                    return None
                if relax(fixed + [v], None):
                    res = go(fixed + [v])
                    if res is not None:
                        return res
            base += l
        return None

    return go([])


def _constant_relation(rel: str, rhs: Fraction) -> bool:
    if rel == "<":
        return 0 < rhs
    if rel == "<=":
        return 0 <= rhs
    if rel == "=":
        return rhs == 0
    if rel == ">=":
        return 0 >= rhs
    return 0 > rhs


# ---------------------------------------------------------------------------
# support minimisation

def minimize_support(sys: LinSystem, point) -> list[Fraction]:
    """Shrink the support of a feasible rational point by pinning coordinates.

    While some nonzero coordinate can be fixed to 0 keeping the system
    feasible, pin it and re-solve.  The result satisfies the system and has
    at most (number of constraints) + 1 nonzero coordinates.
    """
    point = [Fraction(x) for x in point]
    if not satisfies(sys, point):
        raise ValueError("minimize_support requires a feasible starting point")
    pinned: set[int] = set()

    def solve_with(pins: set[int]):
        aug = LinSystem(sys.nvars, list(sys.constraints), sys.domain)
        for i in sorted(pins):
            aug.add({i: 1}, "=", 0)
        return lp_feasible(aug)

    changed = True
    while changed:
        changed = False
        for i in range(sys.nvars):
            if i in pinned or point[i] == 0:
                continue
            trial = solve_with(pinned | {i})
            if trial is not None:
                pinned.add(i)
                point = trial
                changed = True
    support = sum(1 for x in point if x != 0)
    assert support <= len(sys.constraints) + 1, (
        f"support {support} exceeds bound {len(sys.constraints) + 1}"
    )
    return point

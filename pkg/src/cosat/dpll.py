"""A small conflict-driven propositional SAT core.

Used only by the brute-force oracles, which reduce bounded-model search to
propositional satisfiability; the main solver never touches this module.
Two-watched-literal propagation, first-unique-implication-point learning,
and backjumping; fully deterministic (decisions take the lowest-numbered
unassigned variable, trying False first, and no restarts).  Clauses are
lists of nonzero integers, negative for negated variables, variables
numbered from 1.
"""

from __future__ import annotations


def solve(num_vars: int, clauses: list[list[int]]) -> list[bool] | None:
    """A satisfying assignment as a list indexed by var-1, or None."""
    assign = [0] * (num_vars + 1)  # 0 unknown, 1 true, -1 false
    level = [0] * (num_vars + 1)
    reason: list[int | None] = [None] * (num_vars + 1)
    trail: list[int] = []
    trail_lim: list[int] = []
    qhead = 0

    db: list[list[int]] = []
    watches: dict[int, list[int]] = {}

    def value(lit: int) -> int:
        v = assign[abs(lit)]
        return v if lit > 0 else -v

    def enqueue(lit: int, why: int | None) -> bool:
        v = value(lit)
        if v == 1:
            return True
        if v == -1:
            return False
        var = abs(lit)
        assign[var] = 1 if lit > 0 else -1
        level[var] = len(trail_lim)
        reason[var] = why
        trail.append(lit)
        return True

    def attach(ci: int) -> None:
        cl = db[ci]
        watches.setdefault(cl[0], []).append(ci)
        watches.setdefault(cl[1], []).append(ci)

    # load clauses: units go straight onto the trail
    for cl in clauses:
        cl = list(dict.fromkeys(cl))
        if not cl:
            return None
        if any(-l in cl for l in cl):
            continue  # tautological clause
        if len(cl) == 1:
            if not enqueue(cl[0], None):
                return None
        else:
            db.append(cl)
            attach(len(db) - 1)

    def propagate() -> int | None:
        """Exhaust the queue; a conflicting clause index or None."""
        nonlocal qhead
        while qhead < len(trail):
            falsified = -trail[qhead]
            qhead += 1
            watching = watches.get(falsified, [])
            j = 0
            while j < len(watching):
                ci = watching[j]
                cl = db[ci]
                if cl[0] == falsified:
                    cl[0], cl[1] = cl[1], cl[0]
                other = cl[0]
                if value(other) == 1:
                    j += 1
                    continue
                moved = False
                for k in range(2, len(cl)):
                    if value(cl[k]) != -1:
                        cl[1], cl[k] = cl[k], cl[1]
                        watching[j] = watching[-1]
                        watching.pop()
                        watches.setdefault(cl[1], []).append(ci)
                        moved = True
                        break
                if moved:
                    continue
                if not enqueue(other, ci):
                    return ci
                j += 1
        return None

    def analyze(confl: int) -> tuple[list[int], int]:
        """First-UIP learned clause and its backjump level."""
        cur = len(trail_lim)
        seen = [False] * (num_vars + 1)
        learned: list[int] = []
        counter = 0
        p = 0  # literal being resolved on; 0 means take the whole clause
        idx = len(trail) - 1
        cl = db[confl]
        while True:
            for lit in cl:
                if lit == p:
                    continue
                var = abs(lit)
                if not seen[var] and level[var] > 0:
                    seen[var] = True
                    if level[var] == cur:
                        counter += 1
                    else:
                        learned.append(lit)
            while not seen[abs(trail[idx])]:
                idx -= 1
            uip = trail[idx]
            var = abs(uip)
            seen[var] = False
            counter -= 1
            idx -= 1
            if counter == 0:
                learned.insert(0, -uip)
                break
            cl = db[reason[var]]
            p = uip
        if len(learned) == 1:
            return learned, 0
        bj = max(level[abs(l)] for l in learned[1:])
        # watch a literal from the backjump level in second position
        for i in range(1, len(learned)):
            if level[abs(learned[i])] == bj:
                learned[1], learned[i] = learned[i], learned[1]
                break
        return learned, bj

    def backjump(target: int) -> None:
        nonlocal qhead
        mark = trail_lim[target]
        for lit in trail[mark:]:
            assign[abs(lit)] = 0
            reason[abs(lit)] = None
        del trail[mark:]
        del trail_lim[target:]
        qhead = len(trail)

    if propagate() is not None:
        return None

    next_var = 1
    while True:
        confl = propagate()
        if confl is not None:
            if not trail_lim:
                return None
            learned, bj = analyze(confl)
            backjump(bj)
            if len(learned) == 1:
                if not enqueue(learned[0], None):
                    return None
            else:
                db.append(learned)
                attach(len(db) - 1)
                enqueue(learned[0], len(db) - 1)
            next_var = 1
            continue
        while next_var <= num_vars and assign[next_var] != 0:
            next_var += 1
        if next_var > num_vars:
            return [assign[v] == 1 for v in range(1, num_vars + 1)]
        trail_lim.append(len(trail))
        enqueue(-next_var, None)


class CnfBuilder:
    """Fresh-variable bookkeeping plus small Tseitin helpers."""

    def __init__(self):
        self.num_vars = 0
        self.clauses: list[list[int]] = []

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add(self, *lits: int) -> None:
        self.clauses.append(list(lits))

    def define_and(self, lits: list[int]) -> int:
        """v such that v holds iff all lits hold."""
        v = self.new_var()
        for l in lits:
            self.add(-v, l)
        self.add(v, *[-l for l in lits])
        return v

    def define_or(self, lits: list[int]) -> int:
        v = self.new_var()
        for l in lits:
            self.add(v, -l)
        self.add(-v, *lits)
        return v

    def define_iff(self, a: int, b: int) -> int:
        v = self.new_var()
        self.add(-v, -a, b)
        self.add(-v, a, -b)
        self.add(v, a, b)
        self.add(v, -a, -b)
        return v

    def solve(self) -> list[bool] | None:
        return solve(self.num_vars, [list(c) for c in self.clauses])

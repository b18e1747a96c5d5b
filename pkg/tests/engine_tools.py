"""Shared helpers for the engine test modules: carriers over a two-letter
alphabet, signed-atom pools, and exhaustive clause spaces."""

from __future__ import annotations

import itertools

from cosat.formula import Var
from cosat.onestep import Carrier, ClauseAtom, extension, restrict_clause

A, B = Var("a"), Var("b")
LETTERS = (A, B)


def carrier2(designated=None, classes=None) -> Carrier:
    """The full carrier over letters a, b (or a chosen subset of classes)."""
    all_classes = [
        frozenset(),
        frozenset([A]),
        frozenset([B]),
        frozenset([A, B]),
    ]
    chosen = all_classes if classes is None else [all_classes[i] for i in classes]
    return Carrier(LETTERS, tuple(chosen), designated)


def ext(carrier: Carrier, phi) -> frozenset:
    return extension(phi, carrier)


def clauses_over(pool, max_atoms: int):
    """Every clause of 1..max_atoms distinct signed atoms from the pool."""
    for k in range(1, max_atoms + 1):
        for combo in itertools.combinations(pool, k):
            yield tuple(combo)


def signed(op_args_pairs, carrier: Carrier):
    """Pool of signed atoms over (operator, argument formulas) pairs."""
    pool = []
    for op, args in op_args_pairs:
        exts = tuple(ext(carrier, a) for a in args)
        pool.append(ClauseAtom(True, op, exts))
        pool.append(ClauseAtom(False, op, exts))
    return pool


def check(engine, model, clause) -> bool:
    from cosat.onestep import model_check_clause

    return model_check_clause(
        engine, model, restrict_clause(clause, model.carrier.class_set)
    )

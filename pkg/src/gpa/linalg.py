"""Sparse Gaussian elimination over the rationals.

Vectors are dicts ``{column: Fraction}`` with no zero entries.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable


def _axpy(y: dict, a: Fraction, x: dict) -> dict:
    out = dict(y)
    for k, v in x.items():
        w = out.get(k, 0) + a * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


class Echelon:
    """Incrementally maintained reduced row echelon basis of a row space."""

    def __init__(self):
        self.rows: dict[int, dict] = {}  # pivot column -> row with 1 at pivot

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: dict) -> dict:
        v = {k: Fraction(x) for k, x in v.items() if x}
        # rows are fully reduced, so each pivot is cleared exactly once
        hits = [(p, v[p]) for p in v if p in self.rows]
        for p, c in hits:
            v = _axpy(v, -c, self.rows[p])
        return v

    def add(self, v: dict) -> bool:
        """Insert ``v``; returns False when it was already in the span."""
        v = self.reduce(v)
        if not v:
            return False
        p = min(v)
        inv = 1 / v[p]
        v = {k: x * inv for k, x in v.items()}
        for q, row in list(self.rows.items()):
            if p in row:
                self.rows[q] = _axpy(row, -row[p], v)
        self.rows[p] = v
        return True

    def pivots(self) -> list[int]:
        return sorted(self.rows)


def rank(vectors: Iterable[dict]) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return len(e)


def nullspace(columns: list[dict], ncols: int | None = None) -> list[dict]:
    """Basis of ``{x : Σ_j x_j columns[j] = 0}``, one vector per free column.

    Each basis vector has a 1 at its free column and is supported on that
    column and the pivot columns (reduced echelon form).
    """
    if ncols is None:
        ncols = len(columns)
    # transpose to rows indexed by output coordinate
    rows: dict = {}
    for j, col in enumerate(columns):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = Fraction(v)
    e = Echelon()
    for i in sorted(rows):
        e.add(rows[i])
    pivots = set(e.rows)
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = {f: Fraction(1)}
        for p, row in e.rows.items():
            c = row.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


def solve(columns: list[dict], target: dict) -> dict | None:
    """Some ``x`` with ``Σ_j x_j columns[j] = target``, or None."""
    # augmented elimination over columns, tracking combinations
    e: dict[int, tuple[dict, dict]] = {}
    for j, col in enumerate(columns):
        v = {k: Fraction(x) for k, x in col.items() if x}
        comb = {j: Fraction(1)}
        v, comb = _reduce_tracked(e, v, comb)
        if v:
            p = min(v)
            inv = 1 / v[p]
            e[p] = ({k: x * inv for k, x in v.items()}, {k: x * inv for k, x in comb.items()})
    t, comb = _reduce_tracked(e, dict(target), {})
    if t:
        return None
    return {k: -x for k, x in comb.items()}


def _reduce_tracked(e, v, comb):
    changed = True
    while changed:
        changed = False
        for p in sorted(v):
            if p in e:
                row, rc = e[p]
                a = -v[p]
                v = _axpy(v, a, row)
                comb = _axpy(comb, a, rc)
                changed = True
                break
    return v, comb

"""Exact rank and kernel computations over Q on sparse rows."""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

Row = dict[Hashable, Fraction]


class Echelon:
    """Incrementally maintained reduced row echelon form.

    Pivot rows are kept fully reduced against each other, so reducing a new
    row needs a single pass over the pivots it touches.
    """

    def __init__(self):
        self.pivots: dict[Hashable, Row] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Mapping[Hashable, Fraction]) -> Row:
        r = {k: Fraction(v) for k, v in row.items() if v}
        for col in [c for c in r if c in self.pivots]:
            c = r.get(col)
            if not c:
                continue
            for k, v in self.pivots[col].items():
                nv = r.get(k, 0) - c * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        return r

    def add(self, row: Mapping[Hashable, Fraction]) -> bool:
        """Insert a row; return whether it raised the rank."""
        r = self.reduce(row)
        if not r:
            return False
        col = min(r, key=_sort_key)
        inv = Fraction(1) / r[col]
        r = {k: v * inv for k, v in r.items()}
        for p in self.pivots.values():
            c = p.get(col)
            if c:
                for k, v in r.items():
                    nv = p.get(k, 0) - c * v
                    if nv:
                        p[k] = nv
                    else:
                        p.pop(k, None)
        self.pivots[col] = r
        return True


def _sort_key(k):
    return (str(type(k)), k) if not isinstance(k, tuple) else ("", k)


def rank(rows: Iterable[Mapping[Hashable, Fraction]]) -> int:
    e = Echelon()
    for r in rows:
        e.add(r)
    return e.rank


def nullspace(rows: Iterable[Mapping[Hashable, Fraction]], columns: list[Hashable]) -> list[Row]:
    """Basis of ``{x : row . x = 0 for every row}`` with coordinates on ``columns``."""
    e = Echelon()
    for r in rows:
        e.add(r)
    free = [c for c in columns if c not in e.pivots]
    out = []
    for f in free:
        vec: Row = {f: Fraction(1)}
        for pc, prow in e.pivots.items():
            c = prow.get(f)
            if c:
                vec[pc] = -c
        out.append(vec)
    return out

"""Principal symbols at a generic point.

A symbol row is a list of ``m`` homogeneous polynomials in ``xi_1..xi_n``,
each stored as ``{exponent tuple: Fraction}``; row ``s`` has degree ``l(s)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..diffops import linearize
from ..jetcalc import DiffPoly, JetError, Var, indices_of_order
from ..system import PDESystem

XiPoly = dict[tuple[int, ...], Fraction]
SymbolRow = list[XiPoly]


class DegeneratePointError(JetError):
    """The chosen point kills a symbol that is nonzero elsewhere."""


@dataclass
class SymbolSystem:
    """Symbol rows with their orders, the data every symbolic check works on."""

    n: int
    m: int
    rows: list[SymbolRow]
    orders: list[int]

    @property
    def r(self) -> int:
        return len(self.rows)


def _rand(rng: random.Random) -> Fraction:
    while True:
        v = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        if v:
            return v


def eval_point(system: PDESystem, polys: Sequence[DiffPoly], seed: int = 0) -> dict[Var, Fraction]:
    """Seeded small nonzero rationals for every variable, ``t = 1/d`` for inverses."""
    u = system.universe
    rng = random.Random(seed)
    wanted: set[Var] = set()
    for f in polys:
        wanted |= f.variables()
    for d in system.invertibles:
        wanted |= d.variables()
    point: dict[Var, Fraction] = {}
    for v in sorted(wanted):
        if not (u.is_param(v) and v.sym in u.inverses):
            point[v] = _rand(rng)
    for s, d in u.inverses.items():
        val = d.evaluate(point)
        if val == 0:
            raise DegeneratePointError("an invertible expression vanishes at the chosen point")
        point[Var(1, s, 0, (0,) * u.n)] = 1 / val
    return point


def symbols_of(system: PDESystem, seed: int = 0) -> SymbolSystem:
    """Symbols of the linearizations at a seeded generic point."""
    lins = system.linearizations()
    orders = system.orders
    coeffs = [c for row in lins for e in row for c in e.coeffs.values()]
    point = eval_point(system, coeffs, seed)
    rows = []
    for row, k, f in zip(lins, orders, system.equations):
        srow = []
        for e in row:
            poly = {s: c.evaluate(point) for s, c in e.symbol(k).items()}
            srow.append({s: c for s, c in poly.items() if c})
        if all(not p for p in srow):
            raise DegeneratePointError(f"symbol of {f} vanishes at the chosen point")
        rows.append(srow)
    return SymbolSystem(system.n, system.m, rows, orders)


def generic_rows(n: int, m: int, orders: Sequence[int], seed: int = 0) -> SymbolSystem:
    """Constant-coefficient rows with seeded random integer coefficients."""
    rng = random.Random(seed)
    rows = []
    for k in orders:
        row = []
        for _ in range(m):
            poly = {}
            for s in indices_of_order(n, k):
                c = rng.randint(-5, 5)
                if c:
                    poly[s] = Fraction(c)
            row.append(poly)
        rows.append(row)
    return SymbolSystem(n, m, rows, list(orders))


def format_xi(p: XiPoly) -> str:
    if not p:
        return "0"
    parts = []
    for e in sorted(p, reverse=True):
        c = p[e]
        mono = "*".join(f"xi{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
        body = (str(abs(c)) if not mono else
                mono if abs(c) == 1 else f"{abs(c)}*{mono}")
        parts.append(("-" if c < 0 else "+", body))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sg, b in parts[1:]:
        text += f" {sg} {b}"
    return text

"""Symbolic systems ``g_i``, Spencer cohomology and Hilbert data.

Elements of ``S^i T* (x) R^m`` are written in the divided-power basis
``(sigma, j)`` with ``|sigma| = i``.  In that basis the symbol map of a row
``f`` sends ``p`` to ``f(d/dy) p`` and the Spencer differential is
``delta(w (x) omega) = sum_k d_k w (x) dx^k ^ omega``; both act on indices by
plain subtraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial

from ..jetcalc import indices_of_order, mi_add, mi_sub, unit
from .linalg import Echelon, nullspace, rank
from .symbols import SymbolSystem


def _constraints(sym: SymbolSystem, i: int) -> list[dict]:
    rows = []
    for s, (row, k) in enumerate(zip(sym.rows, sym.orders)):
        if i < k:
            continue
        for rho in indices_of_order(sym.n, i - k):
            eq = {}
            for j, poly in enumerate(row):
                for sigma, c in poly.items():
                    key = (mi_add(rho, sigma), j)
                    eq[key] = eq.get(key, 0) + c
            rows.append({k2: v for k2, v in eq.items() if v})
    return rows


def _columns(sym: SymbolSystem, i: int) -> list[tuple]:
    return [(sigma, j) for sigma in indices_of_order(sym.n, i) for j in range(sym.m)]


class Prolongations:
    """Caches ``g_i`` as kernels of the stacked prolongation maps."""

    def __init__(self, sym: SymbolSystem):
        self.sym = sym
        self._g: dict[int, list[dict]] = {}

    def basis(self, i: int) -> list[dict]:
        if i < 0:
            return []
        if i not in self._g:
            self._g[i] = nullspace(_constraints(self.sym, i), _columns(self.sym, i))
        return self._g[i]

    def dim(self, i: int) -> int:
        if i < 0:
            return 0
        cols = len(_columns(self.sym, i))
        return cols - rank(_constraints(self.sym, i))


def dim_g(sym: SymbolSystem, i: int) -> int:
    return Prolongations(sym).dim(i)


def _delta(vec: dict, wedge: tuple[int, ...], n: int) -> dict:
    out: dict = {}
    for (sigma, j), c in vec.items():
        for k in range(n):
            if sigma[k] == 0 or k in wedge:
                continue
            sign = -1 if sum(1 for w in wedge if w < k) % 2 else 1
            new_wedge = tuple(sorted(wedge + (k,)))
            key = (mi_sub(sigma, unit(n, k)), j, new_wedge)
            out[key] = out.get(key, 0) + sign * c
    return {k: v for k, v in out.items() if v}


def _delta_rank(pro: Prolongations, i: int, j: int) -> int:
    n = pro.sym.n
    if i <= 0 or j < 0 or j >= n:
        return 0
    e = Echelon()
    for vec in pro.basis(i):
        for wedge in combinations(range(n), j):
            e.add(_delta(vec, wedge, n))
    return e.rank


@dataclass
class SpencerTable:
    """``h[(i, j)]`` for ``0 <= i <= max_i`` and ``0 <= j <= n``."""

    n: int
    max_i: int
    h: dict[tuple[int, int], int]
    dims: list[int]

    def column_total(self, j: int) -> int:
        return sum(v for (i, jj), v in self.h.items() if jj == j)

    def nonzero(self) -> dict[tuple[int, int], int]:
        return {k: v for k, v in sorted(self.h.items()) if v}

    def euler_characteristic(self) -> int:
        return sum((-1) ** j * v for (_, j), v in self.h.items())


def spencer_cohomology(sym: SymbolSystem, max_i: int) -> SpencerTable:
    """Dimensions ``h^{i,j}`` of the Spencer complex of ``g``."""
    pro = Prolongations(sym)
    n = sym.n
    h = {}
    dims = [len(pro.basis(i)) for i in range(max_i + 2)]
    for i in range(max_i + 1):
        for j in range(n + 1):
            h[(i, j)] = dims[i] * comb(n, j) - _delta_rank(pro, i, j) - _delta_rank(pro, i + 1, j - 1)
    return SpencerTable(n, max_i, h, dims[:max_i + 1])


def _is_polynomial_tail(values: list[int], start: int, degree: int) -> bool:
    seq = [Fraction(v) for v in values[start:]]
    for _ in range(degree + 1):
        seq = [b - a for a, b in zip(seq, seq[1:])]
    return all(x == 0 for x in seq)


@dataclass
class HilbertData:
    """Eventual Hilbert polynomial of ``i -> dim g_i`` and the ``(p, d)`` summary."""

    dims: list[int]
    start: int
    coefficients: list[Fraction]   # in the variable i, constant term first
    p: int
    d: Fraction
    finite_type: bool

    def __call__(self, i: int) -> Fraction:
        return sum(c * i ** k for k, c in enumerate(self.coefficients))


class NotStabilized(Exception):
    pass


def _interpolate(xs: list[int], ys: list[int]) -> list[Fraction]:
    """Coefficients of the interpolating polynomial (exact Lagrange)."""
    size = len(xs)
    coeffs = [Fraction(0)] * size
    for a, (xa, ya) in enumerate(zip(xs, ys)):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for b, xb in enumerate(xs):
            if b == a:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xb * basis[k + 1]
            denom *= xa - xb
        for k in range(size):
            coeffs[k] += ya * basis[k] / denom
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def hilbert_data(sym: SymbolSystem, cap: int = 16, confirm: int = 3) -> HilbertData:
    """Fit ``dim g_i`` by a polynomial that agrees on ``confirm`` extra points.

    The degree is tried from 0 up to ``n - 1``; ``p = deg + 1`` and
    ``d = lead * (p - 1)!``.  A sequence that becomes zero gives finite type
    with ``p = 0`` and ``d = sum dim g_i``.
    """
    pro = Prolongations(sym)
    dims: list[int] = []
    for i in range(cap + 1):
        dims.append(pro.dim(i))
        if len(dims) >= confirm and all(x == 0 for x in dims[-confirm:]):
            return HilbertData(dims, len(dims) - confirm, [Fraction(0)], 0,
                               Fraction(sum(dims)), True)
        for deg in range(sym.n):
            need = deg + 1 + confirm
            if len(dims) < need:
                break
            start = len(dims) - need
            if _is_polynomial_tail(dims, start, deg) and not all(x == 0 for x in dims[start:]):
                xs = list(range(start, start + deg + 1))
                coeffs = _interpolate(xs, dims[start:start + deg + 1])
                if len(coeffs) - 1 == deg and start >= max(sym.orders):
                    p = deg + 1
                    return HilbertData(dims, start, coeffs, p, coeffs[-1] * factorial(p - 1), False)
    raise NotStabilized(f"dim g_i did not stabilize by i = {cap}: {dims}")


def elementary_symmetric(values: list[int], k: int) -> int:
    @lru_cache(maxsize=None)
    def e(i: int, kk: int) -> int:
        if kk == 0:
            return 1
        if i == len(values):
            return 0
        return e(i + 1, kk) + values[i] * e(i + 1, kk - 1)
    return e(0, k)


def expected_spencer_totals(m: int, r: int, n: int) -> dict[int, int]:
    """Column totals ``sum_i h^{i,j}`` for a generic complete-intersection symbol."""
    out = {0: m, 1: r}
    for j in range(2, n + 1):
        out[j] = comb(m + j - 3, j - 2) * comb(r, m + j - 1) if j <= r + 1 - m else 0
    return out


def expected_bigrades(m: int, r: int, n: int, k: int) -> dict[tuple[int, int], int]:
    """Where the nonzero ``h^{i,j}`` sit for rows of a single order ``k``."""
    totals = expected_spencer_totals(m, r, n)
    out = {(0, 0): totals[0], (k - 1, 1): totals[1]}
    for j in range(2, n + 1):
        if totals[j]:
            out[(k * m + k * j - j - k, j)] = totals[j]
    return out


def expected_hilbert(m: int, r: int, n: int, orders: list[int]) -> tuple[int, int]:
    """``(p, d)`` with ``p = m + n - r - 1`` and ``d`` the elementary symmetric sum."""
    return m + n - r - 1, elementary_symmetric(list(orders), r - m + 1)


def two_dim_formula(m: int, orders: list[int], i: int) -> int:
    """``dim g_i`` in two variables for ``r = m + 1`` generic rows of the given orders."""
    ks = sorted(orders)
    r = len(ks)
    total = sum(ks)
    if i < ks[0]:
        return m * (i + 1)
    for j in range(1, r):
        if ks[j - 1] <= i < ks[j]:
            return (m - j) * (i + 1) + sum(ks[:j])
    if ks[-1] <= i < total:
        return total - 1 - i
    return 0

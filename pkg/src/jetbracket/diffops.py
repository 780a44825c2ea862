"""Linear differential operators with jet-polynomial coefficients.

An operator ``A = sum_sigma a_sigma D_sigma`` acts on jet polynomials through
total derivatives.  Rows of such operators (one entry per unknown) model a
linear system or the linearization of a nonlinear equation.

Sign convention for brackets: ``{A_1..A_{m+1}} = sum_k (-1)^k Ndet[A_i]_{i!=k} o A_k``
with ``k`` counted from 1, so that for a single unknown the bracket of two
scalar operators is the commutator ``A o B - B o A``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .jetcalc import (DiffPoly, JetError, MultiIndex, Universe, below, mi_add,
                      mi_binom, mi_sub)


class FiltrationError(JetError):
    """Asked for a symbol at a degree below the operator's order."""


class ShapeError(JetError):
    pass


class LinDiffOp:
    """Scalar operator ``sum a_sigma D_sigma``; the zero coefficients are dropped."""

    __slots__ = ("universe", "coeffs")

    def __init__(self, universe: Universe, coeffs: Mapping[MultiIndex, DiffPoly] | None = None):
        self.universe = universe
        self.coeffs: dict[MultiIndex, DiffPoly] = {}
        for s, c in (coeffs or {}).items():
            if not isinstance(c, DiffPoly):
                c = DiffPoly.const(universe, c)
            if not c.is_zero():
                self.coeffs[tuple(s)] = c

    @classmethod
    def zero(cls, universe: Universe) -> LinDiffOp:
        return cls(universe)

    @classmethod
    def mult(cls, c: DiffPoly | int | Fraction, universe: Universe | None = None) -> LinDiffOp:
        """Multiplication by a function."""
        u = c.universe if isinstance(c, DiffPoly) else universe
        return cls(u, {(0,) * u.n: c})

    @classmethod
    def d(cls, universe: Universe, sigma: MultiIndex | int) -> LinDiffOp:
        if isinstance(sigma, int):
            sigma = tuple(1 if k == sigma else 0 for k in range(universe.n))
        return cls(universe, {tuple(sigma): 1})

    @property
    def order(self) -> int:
        return max((sum(s) for s in self.coeffs), default=0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, f: DiffPoly) -> DiffPoly:
        out = DiffPoly.const(self.universe, 0)
        for s, c in self.coeffs.items():
            out = out + c * f.multi_derivative(s)
        return out

    def __add__(self, other: LinDiffOp) -> LinDiffOp:
        coeffs = dict(self.coeffs)
        for s, c in other.coeffs.items():
            coeffs[s] = coeffs[s] + c if s in coeffs else c
        return LinDiffOp(self.universe, coeffs)

    def __neg__(self) -> LinDiffOp:
        return LinDiffOp(self.universe, {s: -c for s, c in self.coeffs.items()})

    def __sub__(self, other: LinDiffOp) -> LinDiffOp:
        return self + (-other)

    def scale(self, c: DiffPoly | int | Fraction) -> LinDiffOp:
        """Left multiplication by a function."""
        return LinDiffOp(self.universe, {s: a * c for s, a in self.coeffs.items()})

    def __matmul__(self, other: LinDiffOp) -> LinDiffOp:
        return compose(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinDiffOp):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def symbol(self, k: int | None = None) -> dict[MultiIndex, DiffPoly]:
        """Homogeneous part of degree ``k`` (default: the order) as ``{sigma: coeff}``."""
        if k is None:
            k = self.order
        if k < self.order:
            raise FiltrationError(f"operator of order {self.order} has no symbol of degree {k}")
        return {s: c for s, c in self.coeffs.items() if sum(s) == k}

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for s in sorted(self.coeffs, key=lambda s: (-sum(s), [-k for k in s])):
            c = self.coeffs[s]
            d = "D" + "".join(self.universe.base[i] * k for i, k in enumerate(s))
            parts.append(f"({c})" if not any(s) else f"({c})*{d}")
        return " + ".join(parts)

    __repr__ = __str__


def compose(a: LinDiffOp, b: LinDiffOp) -> LinDiffOp:
    """``a o b`` by the Leibniz rule ``D_s o (c D_t) = sum C(s,r) D_r(c) D_{s-r+t}``."""
    u = a.universe
    coeffs: dict[MultiIndex, DiffPoly] = {}
    dcache: dict[tuple[MultiIndex, MultiIndex], DiffPoly] = {}
    for s, ca in a.coeffs.items():
        for r in below(s):
            w = mi_binom(s, r)
            rest = mi_sub(s, r)
            for t, cb in b.coeffs.items():
                key = (r, t)
                db = dcache.get(key)
                if db is None:
                    db = dcache[key] = cb.multi_derivative(r)
                if db.is_zero():
                    continue
                term = ca * db * w
                tgt = mi_add(rest, t)
                coeffs[tgt] = coeffs[tgt] + term if tgt in coeffs else term
    return LinDiffOp(u, coeffs)


class VectorDiffOp:
    """A row ``(A_1, ..., A_m)`` acting on ``m`` unknowns (or ``m`` functions)."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[LinDiffOp]):
        self.entries = tuple(entries)

    @property
    def universe(self) -> Universe:
        return self.entries[0].universe

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, j: int) -> LinDiffOp:
        return self.entries[j]

    def __iter__(self):
        return iter(self.entries)

    @property
    def order(self) -> int:
        return max(e.order for e in self.entries)

    def __call__(self, fs: Sequence[DiffPoly]) -> DiffPoly:
        if len(fs) != len(self.entries):
            raise ShapeError(f"expected {len(self.entries)} arguments, got {len(fs)}")
        out = DiffPoly.const(self.universe, 0)
        for op, f in zip(self.entries, fs):
            out = out + op(f)
        return out

    def __add__(self, other: VectorDiffOp) -> VectorDiffOp:
        return VectorDiffOp(a + b for a, b in zip(self.entries, other.entries))

    def __neg__(self) -> VectorDiffOp:
        return VectorDiffOp(-a for a in self.entries)

    def __sub__(self, other: VectorDiffOp) -> VectorDiffOp:
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorDiffOp):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def left(self, a: LinDiffOp) -> VectorDiffOp:
        """``a o self`` entrywise."""
        return VectorDiffOp(compose(a, e) for e in self.entries)

    def __str__(self) -> str:
        return "(" + ", ".join(str(e) for e in self.entries) + ")"

    __repr__ = __str__


def apply_to_unknowns(row: VectorDiffOp) -> DiffPoly:
    """The polynomial ``sum_j row_j(u^j)`` of a linear system row."""
    u = row.universe
    return row([u.jet(name) for name in u.unknowns])


def linearize(f: DiffPoly) -> VectorDiffOp:
    """Row of operators ``l_j(f) = sum_sigma (df/dp^j_sigma) D_sigma``."""
    u = f.universe
    entries: list[dict[MultiIndex, DiffPoly]] = [{} for _ in range(u.m)]
    for v in f.unknown_dependencies():
        c = f.chain_partial(v)
        if not c.is_zero():
            entries[v.sym][v.index] = c
    return VectorDiffOp(LinDiffOp(u, e) for e in entries)


def ndet(matrix: Sequence[Sequence[LinDiffOp]]) -> LinDiffOp:
    """Column-ordered determinant ``sum_a sgn(a) M[a1][0] o M[a2][1] o ...``.

    Expanded along the first column with memoization on the remaining rows.
    """
    size = len(matrix)
    if any(len(r) != size for r in matrix):
        raise ShapeError("Ndet needs a square matrix")
    if size == 0:
        raise ShapeError("Ndet of an empty matrix")

    @lru_cache(maxsize=None)
    def rec(rows: tuple[int, ...]) -> LinDiffOp:
        col = size - len(rows)
        if len(rows) == 1:
            return matrix[rows[0]][col]
        total = None
        for pos, r in enumerate(rows):
            entry = matrix[r][col]
            if entry.is_zero():
                continue
            term = compose(entry, rec(rows[:pos] + rows[pos + 1:]))
            if pos % 2:
                term = -term
            total = term if total is None else total + term
        return total if total is not None else LinDiffOp.zero(matrix[0][0].universe)

    return rec(tuple(range(size)))


def _check_rows(rows: Sequence[VectorDiffOp]) -> int:
    m = len(rows[0])
    if any(len(r) != m for r in rows) or len(rows) != m + 1:
        raise ShapeError(f"a multi-bracket needs m+1 rows of length m, got {len(rows)} rows")
    return m


def bracket_weights(rows: Sequence[VectorDiffOp]) -> list[LinDiffOp]:
    """Scalar operators ``(-1)^k Ndet[rows]_{i!=k}``, one per row ``k``."""
    m = _check_rows(rows)
    out = []
    for k in range(m + 1):
        minor = [list(r) for i, r in enumerate(rows) if i != k]
        w = ndet(minor) if m else LinDiffOp.mult(1, rows[0].universe)
        out.append(-w if k % 2 == 0 else w)
    return out


def multibracket_linear(rows: Sequence[VectorDiffOp]) -> VectorDiffOp:
    """``sum_k (-1)^k Ndet[rows]_{i!=k} o rows_k``, a row of length ``m``."""
    m = _check_rows(rows)
    total = [LinDiffOp.zero(rows[0].universe) for _ in range(m)]
    for w, row in zip(bracket_weights(rows), rows):
        for j in range(m):
            total[j] = total[j] + compose(w, row[j])
    return VectorDiffOp(total)


def opposite_multibracket_linear(rows: Sequence[VectorDiffOp]) -> VectorDiffOp:
    """Bracket with the free column placed first instead of last.

    Component ``i`` is ``Ndet[C_i | rows]`` where ``C_i`` is the ``i``-th
    column.  For ``m = 1`` this is again the commutator.
    """
    m = _check_rows(rows)
    return VectorDiffOp(ndet([[r[i]] + list(r) for r in rows]) for i in range(m))


def plucker_sides(rows: Sequence[VectorDiffOp], i: int) -> tuple[VectorDiffOp, VectorDiffOp]:
    """Both sides of the Pluecker identity for ``m+2`` rows and column ``i``.

    Left: ``sum_k (-1)^k {rows minus k}^dagger_i o rows_k``.
    Right: ``sum_k (-1)^k rows_k[i] o {rows minus k}``.
    Expanding ``Ndet[C_i | rows | C_j]`` along its first and last columns
    shows the two agree exactly; for ``m = 1`` this is the Jacobi identity.
    """
    m = len(rows[0])
    if len(rows) != m + 2:
        raise ShapeError("the Pluecker identity needs m+2 rows")
    u = rows[0].universe
    left = [LinDiffOp.zero(u) for _ in range(m)]
    right = [LinDiffOp.zero(u) for _ in range(m)]
    for k in range(m + 2):
        rest = [r for j, r in enumerate(rows) if j != k]
        dag = opposite_multibracket_linear(rest)[i]
        br = multibracket_linear(rest)
        sign = 1 if k % 2 else -1
        for j in range(m):
            a = compose(dag, rows[k][j])
            b = compose(rows[k][i], br[j])
            left[j] = left[j] + (a if sign > 0 else -a)
            right[j] = right[j] + (b if sign > 0 else -b)
    return VectorDiffOp(left), VectorDiffOp(right)

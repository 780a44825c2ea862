"""Multi-brackets of nonlinear scalar equations.

For ``m`` unknowns and ``m+1`` equations ``F_1..F_{m+1}`` the bracket is

    {F_1..F_{m+1}} = sum_k (-1)^k Ndet[l(F_i)]_{i!=k} (F_k)

where ``l(F)`` is the linearization row.  For one unknown this is the Mayer
bracket ``l_F(G) - l_G(F)``.  The coordinate form replaces the operator
determinant by a commutative determinant of symbols; both agree modulo the
prolonged equations of lower order.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Sequence

from .diffops import ShapeError, bracket_weights, linearize
from .jetcalc import DiffPoly, MultiIndex, mi_add

Symbol = dict[MultiIndex, DiffPoly]


def _check(fs: Sequence[DiffPoly]) -> int:
    if not fs:
        raise ShapeError("no equations")
    u = fs[0].universe
    for f in fs:
        u._check(f)
    if len(fs) != u.m + 1:
        raise ShapeError(f"a bracket needs m+1 = {u.m + 1} equations, got {len(fs)}")
    return u.m


def multibracket(fs: Sequence[DiffPoly]) -> DiffPoly:
    """Nonlinear multi-bracket through the linearizations of the equations."""
    _check(fs)
    rows = [linearize(f) for f in fs]
    out = DiffPoly.const(fs[0].universe, 0)
    for w, f in zip(bracket_weights(rows), fs):
        out = out + w(f)
    return out


def mayer_bracket(f: DiffPoly, g: DiffPoly) -> DiffPoly:
    if f.universe.m != 1:
        raise ShapeError("the Mayer bracket is for a single unknown")
    return multibracket([f, g])


def sign_of(perm: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _sym_mul(a: Symbol, b: Symbol) -> Symbol:
    out: Symbol = {}
    for s, ca in a.items():
        for t, cb in b.items():
            k = mi_add(s, t)
            p = ca * cb
            out[k] = out[k] + p if k in out else p
    return {k: c for k, c in out.items() if not c.is_zero()}


def _sym_add(a: Symbol, b: Symbol, sign: int = 1) -> Symbol:
    out = dict(a)
    for k, c in b.items():
        c = c if sign > 0 else -c
        out[k] = out[k] + c if k in out else c
    return {k: c for k, c in out.items() if not c.is_zero()}


def symbol_det(matrix: Sequence[Sequence[Symbol]]) -> Symbol:
    """Commutative determinant of a square matrix of symbols."""
    size = len(matrix)
    total: Symbol = {}
    for perm in permutations(range(size)):
        term: Symbol | None = None
        for c in range(size):
            entry = matrix[perm[c]][c]
            if not entry:
                term = None
                break
            term = entry if term is None else _sym_mul(term, entry)
        if term:
            total = _sym_add(total, term, sign_of(perm))
    return total


def jet_symbols(f: DiffPoly, top_only: bool = False) -> list[Symbol]:
    """Per unknown, ``{tau: df/dp^j_tau}``; optionally only ``|tau| = order(f)``."""
    u = f.universe
    rows: list[Symbol] = [{} for _ in range(u.m)]
    k = f.order()
    for v in f.unknown_dependencies():
        if top_only and v.order != k:
            continue
        c = f.chain_partial(v)
        if not c.is_zero():
            rows[v.sym][v.index] = c
    return rows


def coordinate_multibracket(fs: Sequence[DiffPoly], variant: str = "full") -> DiffPoly:
    """Bracket from commutative symbol determinants.

    ``variant="full"`` sums over all jet indices; ``"principal"`` keeps only
    indices of each equation's own order.  The sign is normalized so the
    result agrees with :func:`multibracket` modulo lower-order prolongations.
    """
    if variant not in ("full", "principal"):
        raise ValueError(f"unknown variant {variant!r}")
    _check(fs)
    top = variant == "principal"
    syms = [jet_symbols(f, top) for f in fs]
    out = DiffPoly.const(fs[0].universe, 0)
    for k, f in enumerate(fs):
        minor = [syms[i] for i in range(len(fs)) if i != k]
        det = symbol_det(minor)
        part = DiffPoly.const(f.universe, 0)
        for s, c in det.items():
            part = part + c * f.multi_derivative(s)
        out = out + part if k % 2 else out - part
    return out


def coordinate_multibracket_permsum(fs: Sequence[DiffPoly], variant: str = "full") -> DiffPoly:
    """The same bracket written as ``1/m!`` times a sum over all of ``S_{m+1}``.

    Slow; kept as an independent route for cross-checks.
    """
    m = _check(fs)
    top = variant == "principal"
    syms = [jet_symbols(f, top) for f in fs]
    out = DiffPoly.const(fs[0].universe, 0)
    for zeta in permutations(range(m + 1)):
        det = symbol_det([syms[zeta[j]] for j in range(m)])
        last = fs[zeta[m]]
        for s, c in det.items():
            term = c * last.multi_derivative(s)
            out = out + term if sign_of(zeta) > 0 else out - term
    out = out * Fraction(1, factorial(m))
    return out if m % 2 else -out

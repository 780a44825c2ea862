"""Buchberger's algorithm over Q with block orders.

Polynomials are dicts mapping dense exponent tuples to ``Fraction``
coefficients.  A block order compares the first block by grevlex, then the
second, and so on; a single block is plain grevlex.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

Exp = tuple[int, ...]
Poly = dict[Exp, Fraction]


class BudgetExceeded(Exception):
    """The computation outgrew its degree or size budget."""


class BlockOrder:
    """Product of grevlex orders; ``blocks`` lists variable positions, highest first."""

    def __init__(self, nvars: int, blocks: Sequence[Sequence[int]] | None = None):
        self.nvars = nvars
        if blocks is None:
            blocks = [list(range(nvars))]
        flat = sorted(i for b in blocks for i in b)
        if flat != list(range(nvars)):
            raise ValueError("blocks must partition the variables")
        self.blocks = [tuple(b) for b in blocks]
        self._rev = [tuple(reversed(b)) for b in self.blocks]
        self._cache: dict[Exp, tuple] = {}

    def key(self, e: Exp) -> tuple:
        k = self._cache.get(e)
        if k is None:
            parts = []
            for rb in self._rev:
                parts.append(sum(e[i] for i in rb))
                parts.extend(-e[i] for i in rb)
            k = self._cache[e] = tuple(parts)
        return k

    def extended(self, extra: int) -> BlockOrder:
        """Same order with ``extra`` new variables appended to the last block."""
        blocks = [list(b) for b in self.blocks]
        blocks[-1].extend(range(self.nvars, self.nvars + extra))
        return BlockOrder(self.nvars + extra, blocks)


def _divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Exp, b: Exp) -> Exp:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


def _coprime(a: Exp, b: Exp) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def leading(p: Poly, order: BlockOrder) -> Exp:
    return max(p, key=order.key)


def _axpy(p: Poly, c: Fraction, shift: Exp, g: Poly) -> None:
    """In place ``p -= c * x^shift * g``."""
    for e, a in g.items():
        t = _add(e, shift)
        v = p.get(t, 0) - c * a
        if v:
            p[t] = v
        else:
            p.pop(t, None)


def monic(p: Poly, order: BlockOrder) -> Poly:
    inv = Fraction(1) / p[leading(p, order)]
    return {e: c * inv for e, c in p.items()}


class Basis:
    """A list of monic polynomials with cached leading monomials."""

    def __init__(self, order: BlockOrder):
        self.order = order
        self.polys: list[Poly] = []
        self.lms: list[Exp] = []

    def add(self, p: Poly) -> int:
        p = monic(p, self.order)
        self.polys.append(p)
        self.lms.append(leading(p, self.order))
        return len(self.polys) - 1

    def divisor(self, e: Exp, active: Iterable[int] | None = None) -> int | None:
        for i in (range(len(self.polys)) if active is None else active):
            if _divides(self.lms[i], e):
                return i
        return None


def reduce_full(p: Poly, polys: Sequence[Poly], lms: Sequence[Exp], order: BlockOrder) -> Poly:
    """Remainder of ``p`` on division by monic ``polys`` (all terms reduced)."""
    p = dict(p)
    rem: Poly = {}
    while p:
        lm = leading(p, order)
        c = p[lm]
        for g, glm in zip(polys, lms):
            if _divides(glm, lm):
                _axpy(p, c, _sub(lm, glm), g)
                break
        else:
            rem[lm] = c
            del p[lm]
    return rem


def _reduce_top(p: Poly, basis: Basis, active: list[int]) -> Poly:
    order = basis.order
    while p:
        lm = leading(p, order)
        i = basis.divisor(lm, active)
        if i is None:
            return p
        _axpy(p, p[lm], _sub(lm, basis.lms[i]), basis.polys[i])
    return p


def groebner(gens: Iterable[Poly], order: BlockOrder, max_degree: int = 24,
             max_monomials: int = 200_000) -> list[Poly]:
    """Reduced Groebner basis (monic, sorted by leading monomial).

    Raises :class:`BudgetExceeded` when an intermediate polynomial exceeds
    ``max_degree`` or the basis holds more than ``max_monomials`` terms.
    """
    basis = Basis(order)
    active: list[int] = []
    pairs: list[tuple[int, int, int]] = []   # (sugar, i, j)
    sugar: list[int] = []
    size = 0

    def deg(e: Exp) -> int:
        return sum(e)

    def update(h: int) -> None:
        nonlocal pairs, active
        lm_h = basis.lms[h]
        # Gebauer-Moeller: drop new pairs made redundant by others
        cand = [(i, _lcm(basis.lms[i], lm_h)) for i in active]
        keep = []
        for idx, (i, l) in enumerate(cand):
            coprime = _coprime(basis.lms[i], lm_h)
            dominated = any(_divides(l2, l) and (l2 != l or idx2 < idx)
                            for idx2, (i2, l2) in enumerate(cand) if idx2 != idx
                            and not _coprime(basis.lms[i2], lm_h))
            if coprime:
                continue
            if not dominated:
                keep.append((i, l))
        pairs = [(s, i, j) for s, i, j in pairs
                 if not (_divides(lm_h, _lcm(basis.lms[i], basis.lms[j]))
                         and _lcm(basis.lms[i], lm_h) != _lcm(basis.lms[i], basis.lms[j])
                         and _lcm(basis.lms[j], lm_h) != _lcm(basis.lms[i], basis.lms[j]))]
        for i, l in keep:
            s = max(sugar[i] + deg(l) - deg(basis.lms[i]), sugar[h] + deg(l) - deg(lm_h))
            pairs.append((s, i, h))
        active = [i for i in active if not _divides(lm_h, basis.lms[i])] + [h]

    def admit(p: Poly, s: int) -> None:
        nonlocal size
        h = basis.add(p)
        sugar.append(s)
        d = max(deg(e) for e in basis.polys[h])
        if d > max_degree:
            raise BudgetExceeded(f"degree {d} exceeds the budget {max_degree}")
        size += len(basis.polys[h])
        log.debug("basis %d, pairs %d, new element %d terms, degree %d", len(basis.polys),
                  len(pairs), len(basis.polys[h]), d)
        if size > max_monomials:
            raise BudgetExceeded(f"basis holds more than {max_monomials} monomials")
        update(h)

    for g in gens:
        g = {e: Fraction(c) for e, c in g.items() if c}
        if not g:
            continue
        g = _reduce_top(g, basis, active)
        if g:
            admit(g, max(deg(e) for e in g))

    while pairs:
        pairs.sort(key=lambda t: (t[0], order.key(_lcm(basis.lms[t[1]], basis.lms[t[2]]))),
                   reverse=True)
        s, i, j = pairs.pop()
        l = _lcm(basis.lms[i], basis.lms[j])
        sp: Poly = {}
        _axpy(sp, Fraction(-1), _sub(l, basis.lms[i]), basis.polys[i])
        _axpy(sp, Fraction(1), _sub(l, basis.lms[j]), basis.polys[j])
        sp = _reduce_top(sp, basis, active)
        if sp:
            admit(sp, s)

    # interreduce
    polys = [basis.polys[i] for i in active]
    lms = [basis.lms[i] for i in active]
    out = []
    for k, (p, lm) in enumerate(zip(polys, lms)):
        others = [q for q2, q in enumerate(polys) if q2 != k]
        other_lms = [q for q2, q in enumerate(lms) if q2 != k]
        tail = {e: c for e, c in p.items() if e != lm}
        r = reduce_full(tail, others, other_lms, order)
        r[lm] = Fraction(1)
        out.append(r)
    out.sort(key=lambda p: order.key(leading(p, order)))
    return out

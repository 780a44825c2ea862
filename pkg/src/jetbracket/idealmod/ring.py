"""Polynomial rings of truncated jet spaces and the prolonged ideals ``J_s``."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from ..jetcalc import DiffPoly, JetError, Var, indices_of_order, indices_up_to
from ..system import PDESystem
from .groebner import BlockOrder, BudgetExceeded, Poly, groebner, reduce_full, leading


def prolonged_generators(system: PDESystem, s: int) -> list[tuple[str, DiffPoly]]:
    """``D_tau F_i`` for every equation and ``order(F_i) + |tau| <= s``."""
    out = []
    n = system.n
    for name, f in zip(system.eq_names, system.equations):
        k = f.order()
        for tau in indices_up_to(n, s - k) if s >= k else []:
            label = name if not any(tau) else f"D{''.join(system.universe.base[i] * c for i, c in enumerate(tau))}({name})"
            out.append((label, f.multi_derivative(tau)))
    return out


class TruncatedRing:
    """Variables of ``J^s`` plus the parameter jets and inverse symbols in use.

    The order is a block order: unknown jets first (grevlex, ranked by jet
    order, then symbol, then graded index), then inverse symbols, parameter
    jets and base variables (grevlex).  With ``split_orders`` every jet order
    of the unknowns gets its own block, highest order first.
    """

    def __init__(self, system: PDESystem, s: int, extra: Iterable[DiffPoly] = (),
                 split_orders: bool = False):
        self.system = system
        self.s = s
        u = system.universe
        unknown = []
        for k in range(s, -1, -1):
            for j in range(u.m):
                for sigma in indices_of_order(u.n, k):
                    unknown.append(Var(1, j, k, sigma))
        gens = prolonged_generators(system, s)
        used: set[Var] = set()
        for _, g in gens:
            used |= g.variables()
        for f in extra:
            used |= f.variables()
        for t in system.inverse_symbols:
            used |= t.variables()
        for d in system.invertibles:
            used |= d.variables()
        for v in used:
            if u.is_unknown(v) and v.order > s:
                raise JetError(f"{u.var_name(v)} lies beyond order {s}")
        inv = sorted(v for v in used if u.is_param(v) and v.sym in u.inverses)
        params = sorted((v for v in used if u.is_param(v) and v.sym not in u.inverses),
                        key=lambda v: (v.sym, -v.order, [-c for c in v.index]))
        base = [Var(0, i, 0, ()) for i in range(u.n)]
        self.vars: list[Var] = unknown + inv + params + base
        self.pos = {v: i for i, v in enumerate(self.vars)}
        nu = len(unknown)
        if split_orders:
            blocks, start = [], 0
            for k in range(s, -1, -1):
                size = u.m * len(indices_of_order(u.n, k))
                blocks.append(list(range(start, start + size)))
                start += size
        else:
            blocks = [list(range(nu))]
        blocks.append(list(range(nu, len(self.vars))))
        self.order = BlockOrder(len(self.vars), blocks)
        self.generator_labels = [lab for lab, _ in gens]
        self.generators = [g for _, g in gens]

    def extend(self, f: DiffPoly) -> list[Var]:
        """Append parameter or base variables of ``f`` not yet in the ring."""
        u = self.system.universe
        new = sorted(v for v in f.variables() if v not in self.pos)
        for v in new:
            if u.is_unknown(v):
                raise JetError(f"{u.var_name(v)} lies beyond order {self.s}")
        if new:
            self.order = self.order.extended(len(new))
            for v in new:
                self.pos[v] = len(self.vars)
                self.vars.append(v)
        return new

    def to_poly(self, f: DiffPoly) -> Poly:
        nv = len(self.vars)
        out: Poly = {}
        for mono, c in f.terms.items():
            e = [0] * nv
            for v, k in mono:
                e[self.pos[v]] = k
            out[tuple(e)] = Fraction(c)
        return out

    def from_poly(self, p: Poly) -> DiffPoly:
        terms = {}
        for e, c in p.items():
            mono = tuple(sorted((self.vars[i], k) for i, k in enumerate(e) if k))
            terms[mono] = c
        return DiffPoly(self.system.universe, terms)

    def ideal_generators(self) -> list[Poly]:
        gens = [self.to_poly(g) for g in self.generators]
        one = DiffPoly.const(self.system.universe, 1)
        for d, t in zip(self.system.invertibles, self.system.inverse_symbols):
            gens.append(self.to_poly(t * d - one))
        return gens


class IdealModel:
    """``J_s`` of a system with a lazily computed Groebner basis."""

    def __init__(self, system: PDESystem, s: int, extra: Iterable[DiffPoly] = (),
                 max_degree: int = 24, max_monomials: int = 200_000,
                 split_orders: bool = False):
        self.ring = TruncatedRing(system, s, extra, split_orders)
        self.max_degree = max_degree
        self.max_monomials = max_monomials
        self._gb: list[Poly] | None = None

    @property
    def basis(self) -> list[Poly]:
        if self._gb is None:
            self._gb = groebner(self.ring.ideal_generators(), self.ring.order,
                                self.max_degree, self.max_monomials)
        return self._gb

    def basis_polys(self) -> list[DiffPoly]:
        return [self.ring.from_poly(p) for p in self.basis]

    def normal_form(self, f: DiffPoly) -> DiffPoly:
        gb = self.basis
        if self.ring.extend(f):
            self._gb = gb = [self._pad(p) for p in gb]
        lms = [leading(p, self.ring.order) for p in gb]
        return self.ring.from_poly(reduce_full(self.ring.to_poly(f), gb, lms, self.ring.order))

    def _pad(self, p: Poly) -> Poly:
        extra = len(self.ring.vars) - len(next(iter(p)))
        return {e + (0,) * extra: c for e, c in p.items()}

    def contains(self, f: DiffPoly) -> bool:
        return self.normal_form(f).is_zero()


__all__ = ["BudgetExceeded", "IdealModel", "TruncatedRing", "prolonged_generators"]

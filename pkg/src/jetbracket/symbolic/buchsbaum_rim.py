"""Graded exactness of the Buchsbaum-Rim complex of a symbol matrix.

With ``U`` free on ``e_1..e_r`` (``e_s`` in degree ``l(s)``), ``V = R^m`` and
``phi(e_s) = f_s``, the complex is

    0 -> S^{r-m-1}V* (x) L^r U -> ... -> S^1 V* (x) L^{m+2} U -> L^{m+1} U -> U -> V

where ``d(mu (x) e_T) = sum_i (-1)^i sum_j (d mu / d v_j) f_{t_i j} e_{T - t_i}``
and ``L^{m+1} U -> U`` sends ``e_S`` to ``sum_i (-1)^i det(f_{S - s_i}) e_{s_i}``.
For ``m = 1`` it is the Koszul complex, for ``r = m + 1`` Hilbert-Burch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from ..jetcalc import indices_of_order
from .gci import det
from .linalg import rank
from .symbols import SymbolSystem, XiPoly

# a free module term: list of (label, degree); a map: label -> {label: XiPoly}


@dataclass
class Term:
    name: str
    gens: list[tuple[object, int]]


def _complex(sym: SymbolSystem) -> tuple[list[Term], list[dict]]:
    n, m, r = sym.n, sym.m, sym.r
    deg = sym.orders
    V = Term("V", [(j, 0) for j in range(m)])
    U = Term("U", [(s, deg[s]) for s in range(r)])
    phi = {s: {j: sym.rows[s][j] for j in range(m) if sym.rows[s][j]} for s in range(r)}
    terms = [V, U]
    maps = [phi]
    if r <= m:
        return terms, maps
    L = Term(f"L^{m + 1}U", [(S, sum(deg[s] for s in S)) for S in combinations(range(r), m + 1)])
    eps = {}
    for S in combinations(range(r), m + 1):
        img = {}
        for i, s in enumerate(S):
            rest = [t for t in S if t != s]
            d = det([[sym.rows[t][j] for j in range(m)] for t in rest], n)
            if d:
                img[s] = d if i % 2 == 0 else {e: -c for e, c in d.items()}
        eps[S] = img
    terms.append(L)
    maps.append(eps)
    for a in range(1, r - m):
        T = Term(f"S^{a}V*(x)L^{m + 1 + a}U",
                 [((mu, Tset), sum(deg[s] for s in Tset))
                  for mu in indices_of_order(m, a)
                  for Tset in combinations(range(r), m + 1 + a)])
        d_map = {}
        for (mu, Tset), _ in T.gens:
            img: dict = {}
            for i, t in enumerate(Tset):
                rest = tuple(x for x in Tset if x != t)
                for j in range(m):
                    if mu[j] == 0:
                        continue
                    f = sym.rows[t][j]
                    if not f:
                        continue
                    nu = tuple(k - (1 if q == j else 0) for q, k in enumerate(mu))
                    target = rest if a == 1 else (nu, rest)
                    w = mu[j] * (-1 if i % 2 else 1)
                    acc = img.setdefault(target, {})
                    for e, c in f.items():
                        acc[e] = acc.get(e, 0) + w * c
            d_map[(mu, Tset)] = {k: {e: c for e, c in v.items() if c} for k, v in img.items()}
        terms.append(T)
        maps.append(d_map)
    return terms, maps


def _graded_basis(term: Term, d: int, n: int) -> list[tuple]:
    out = []
    for g, dg in term.gens:
        if d >= dg:
            out.extend((mono, g) for mono in indices_of_order(n, d - dg))
    return out


def _map_rows(src: Term, mp: dict, d: int, n: int) -> list[dict]:
    rows = []
    for mono, g in _graded_basis(src, d, n):
        row: dict = {}
        for tgt, poly in mp[g].items():
            for e, c in poly.items():
                key = (tuple(x + y for x, y in zip(mono, e)), tgt)
                row[key] = row.get(key, 0) + c
        rows.append({k: v for k, v in row.items() if v})
    return rows


@dataclass
class ExactnessReport:
    exact: bool
    max_degree: int
    failures: list[tuple[str, int, int]] = field(default_factory=list)  # (node, degree, homology dim)
    compositions_vanish: bool = True

    def first_failure(self) -> tuple[str, int, int] | None:
        return self.failures[0] if self.failures else None


def _compose_is_zero(first: dict, second: dict) -> bool:
    for g, img in first.items():
        acc: dict = {}
        for mid, p in img.items():
            for tgt, q in second.get(mid, {}).items():
                slot = acc.setdefault(tgt, {})
                for e1, c1 in p.items():
                    for e2, c2 in q.items():
                        e = tuple(x + y for x, y in zip(e1, e2))
                        slot[e] = slot.get(e, 0) + c1 * c2
        if any(c for slot in acc.values() for c in slot.values()):
            return False
    return True


def buchsbaum_rim_exactness(sym: SymbolSystem, max_degree: int = 6) -> ExactnessReport:
    """Check homology at every node except ``V`` in degrees ``0..max_degree``."""
    terms, maps = _complex(sym)
    n = sym.n
    vanish = all(_compose_is_zero(maps[k + 1], maps[k]) for k in range(len(maps) - 1))
    failures = []
    for d in range(max_degree + 1):
        for k in range(1, len(terms)):
            dim = len(_graded_basis(terms[k], d, n))
            if not dim:
                continue
            out_rank = rank(_map_rows(terms[k], maps[k - 1], d, n))
            in_rank = rank(_map_rows(terms[k + 1], maps[k], d, n)) if k < len(maps) else 0
            h = dim - out_rank - in_rank
            if h:
                failures.append((terms[k].name, d, h))
    failures.sort(key=lambda f: (f[1], f[0]))
    return ExactnessReport(not failures and vanish, max_degree, failures, vanish)

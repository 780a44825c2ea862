"""First syzygy operators of linear systems by a bounded ansatz.

For a subset ``tau`` of ``m+1`` rows with ``{Delta_tau} = sum_j B^j o Delta_j``,
the operator

    nabla_tau(f) = sum_k (-1)^k Ndet[Delta_{i_s}]_{s!=k} f_{i_k} - sum_j B^j f_j

kills every ``(Delta_1 u, ..., Delta_r u)``.  ``B^j`` has order at most
``sum l - l(j) - 1`` and coefficients that are polynomials of bounded degree
in the base variables and the inverse symbols.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from ..diffops import LinDiffOp, VectorDiffOp, bracket_weights, compose, multibracket_linear
from ..jetcalc import DiffPoly, JetError, Var, indices_up_to
from ..symbolic.linalg import Echelon
from ..system import PDESystem
from .groebner import BlockOrder, groebner, leading, reduce_full


class SyzygyNotFound(JetError):
    pass


class _CoefficientRing:
    """Normal forms modulo ``t_q d_q - 1`` in the variables that occur."""

    def __init__(self, system: PDESystem, polys: Sequence[DiffPoly]):
        self.universe = system.universe
        used: set[Var] = set()
        for f in polys:
            used |= f.variables()
        one = DiffPoly.const(self.universe, 1)
        rels = [t * d - one for d, t in zip(system.invertibles, system.inverse_symbols)]
        for g in rels:
            used |= g.variables()
        self.vars = sorted(used)
        self.pos = {v: i for i, v in enumerate(self.vars)}
        self.order = BlockOrder(len(self.vars))
        self.gb = groebner([self._to(g) for g in rels], self.order) if rels else []
        self.lms = [leading(p, self.order) for p in self.gb]

    def _to(self, f: DiffPoly) -> dict:
        out = {}
        for mono, c in f.terms.items():
            e = [0] * len(self.vars)
            for v, k in mono:
                e[self.pos[v]] = k
            out[tuple(e)] = Fraction(c)
        return out

    def normal_terms(self, f: DiffPoly) -> dict:
        if any(v not in self.pos for v in f.variables()):
            raise JetError("coefficient outside the ansatz ring")
        return reduce_full(self._to(f), self.gb, self.lms, self.order)


@dataclass
class SyzygyOperator:
    subset: tuple[int, ...]
    weights: list[LinDiffOp]        # (-1)^k Ndet of the other rows, one per subset member
    B: list[LinDiffOp]              # one per equation of the system

    def __call__(self, fs: Sequence[DiffPoly]) -> DiffPoly:
        out = DiffPoly.const(fs[0].universe, 0)
        for w, i in zip(self.weights, self.subset):
            out = out + w(fs[i])
        for b, f in zip(self.B, fs):
            out = out - b(f)
        return out

    def as_row(self, r: int) -> list[LinDiffOp]:
        """The operator as a row acting on ``(f_1..f_r)``."""
        row = [-b for b in self.B]
        for w, i in zip(self.weights, self.subset):
            row[i] = row[i] + w
        return row


def _coefficient_monomials(system: PDESystem, degree: int) -> list[DiffPoly]:
    u = system.universe
    gens = [u.x(name) for name in u.base] + list(system.inverse_symbols)
    out = []
    for exps in product(range(degree + 1), repeat=len(gens)):
        if sum(exps) > degree:
            continue
        mono = DiffPoly.const(u, 1)
        for g, e in zip(gens, exps):
            mono = mono * g ** e
        out.append(mono)
    return out


def first_syzygy(system: PDESystem, subset: Sequence[int], max_coeff_degree: int = 4) -> SyzygyOperator:
    """Solve ``{Delta_tau} = sum_j B^j o Delta_j`` exactly.

    Operator orders always run up to the bound; the coefficient degree of the
    ansatz is raised from 0 to ``max_coeff_degree`` until a solution appears.
    """
    if not system.is_linear():
        raise JetError("syzygy operators are computed for linear systems")
    subset = tuple(subset)
    for degree in range(max_coeff_degree + 1):
        try:
            return _solve(system, subset, degree)
        except _NoSolution:
            pass
    raise SyzygyNotFound(
        f"no B^j with coefficients of degree <= {max_coeff_degree} in "
        f"{list(system.universe.base) + [str(t) for t in system.inverse_symbols]}")


class _NoSolution(Exception):
    pass


def _solve(system: PDESystem, subset: tuple[int, ...], coeff_degree: int) -> SyzygyOperator:
    rows = system.linearizations()
    sub_rows = [rows[i] for i in subset]
    target = multibracket_linear(sub_rows)
    orders = system.orders
    total = sum(orders[i] for i in subset)
    u = system.universe
    monos = _coefficient_monomials(system, coeff_degree)

    unknowns = []      # (j, sigma, monomial)
    images = []        # VectorDiffOp of (mono D_sigma) o Delta_j
    for j, row in enumerate(rows):
        bound = total - orders[j] - 1
        if bound < 0:
            continue
        for sigma in indices_up_to(u.n, bound):
            for mono in monos:
                op = LinDiffOp(u, {sigma: mono})
                unknowns.append((j, sigma, mono))
                images.append(VectorDiffOp(compose(op, e) for e in row))

    polys = [c for e in target for c in e.coeffs.values()]
    polys += [c for img in images for e in img for c in e.coeffs.values()]
    ring = _CoefficientRing(system, polys + monos)

    def flatten(vec: VectorDiffOp) -> dict:
        out = {}
        for comp, e in enumerate(vec):
            for sigma, c in e.coeffs.items():
                for mono, v in ring.normal_terms(c).items():
                    out[(comp, sigma, mono)] = v
        return out

    # rows of the linear system are indexed by coordinates; columns by unknowns
    columns: dict = {}
    for k, img in enumerate(images):
        for key, v in flatten(img).items():
            columns.setdefault(key, {})[k] = v
    rhs = flatten(target)
    ech = Echelon()
    for key in set(columns) | set(rhs):
        eq = dict(columns.get(key, {}))
        if key in rhs:
            eq["rhs"] = rhs[key]
        ech.add(eq)
    if "rhs" in ech.pivots:
        raise _NoSolution
    # each pivot row reads c_piv + ... + b * y = 0; take y = -1 and free unknowns 0
    coeffs = {k: Fraction(0) for k in range(len(unknowns))}
    for piv, row in ech.pivots.items():
        coeffs[piv] = row.get("rhs", Fraction(0))
    B = [LinDiffOp.zero(u) for _ in rows]
    for k, (j, sigma, mono) in enumerate(unknowns):
        c = coeffs[k]
        if c:
            B[j] = B[j] + LinDiffOp(u, {sigma: mono * c})
    op = SyzygyOperator(subset, bracket_weights(sub_rows), B)
    residual = target - _combine(B, rows)
    for e in residual:
        for c in e.coeffs.values():
            if ring.normal_terms(c):
                raise SyzygyNotFound("internal check failed: residual does not vanish")
    return op


def _combine(B: Sequence[LinDiffOp], rows: Sequence[VectorDiffOp]) -> VectorDiffOp:
    m = len(rows[0])
    total = [LinDiffOp.zero(rows[0].universe) for _ in range(m)]
    for b, row in zip(B, rows):
        for k in range(m):
            total[k] = total[k] + compose(b, row[k])
    return VectorDiffOp(total)

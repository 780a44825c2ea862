"""Exact polynomials on jet space and their total derivatives.

A :class:`Universe` fixes the independent variables ``x^1..x^n``, the
unknown functions ``u^1..u^m`` and any number of parameter functions.
Parameters may carry derivative rules (for instance ``D_x E = E*lam[1,0]``
or a chain rule ``D_x G = Gu*u[1,0] + Gv*v[1,0]``); a parameter without a
rule in some direction is differentiated formally into its own jets.

:class:`DiffPoly` is an immutable sparse polynomial with ``Fraction``
coefficients in base variables and jet variables.  Orders only count jets of
unknowns.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb
from typing import Iterable, Iterator, Mapping, NamedTuple, Union

MultiIndex = tuple[int, ...]
Scalar = Union[int, Fraction]

MAX_RULE_DEPTH = 64


class JetError(Exception):
    """Base class for kernel errors."""


class UniverseMismatchError(JetError):
    pass


class RuleCycleError(JetError):
    pass


class ZeroOrderError(JetError):
    """Raised when asking for the order of the zero polynomial."""


# -- multi-indices ---------------------------------------------------------

def unit(n: int, i: int) -> MultiIndex:
    return tuple(1 if k == i else 0 for k in range(n))


def mi_add(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


def mi_sub(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x - y for x, y in zip(a, b))


def mi_leq(a: MultiIndex, b: MultiIndex) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mi_binom(a: MultiIndex, b: MultiIndex) -> int:
    out = 1
    for x, y in zip(a, b):
        out *= comb(x, y)
    return out


def below(a: MultiIndex) -> Iterator[MultiIndex]:
    """All multi-indices rho with rho <= a componentwise."""
    return product(*(range(k + 1) for k in a))


def indices_of_order(n: int, k: int) -> list[MultiIndex]:
    """Multi-indices of length ``n`` and weight ``k`` in graded-lex order."""
    if n == 0:
        return [()] if k == 0 else []
    out = []
    for first in range(k, -1, -1):
        for rest in indices_of_order(n - 1, k - first):
            out.append((first,) + rest)
    return out


def indices_up_to(n: int, k: int) -> list[MultiIndex]:
    return [s for j in range(k + 1) for s in indices_of_order(n, j)]


# -- variables ---------------------------------------------------------------

class Var(NamedTuple):
    """A base variable (kind 0) or a jet ``p^sym_index`` (kind 1).

    Tuple comparison gives the ranking used for canonical printing: base
    variables first, then jets by symbol declaration order and graded index.
    """

    kind: int
    sym: int
    order: int
    index: MultiIndex


Monomial = tuple[tuple[Var, int], ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _num(c) -> int | Fraction:
    """Integral rationals are kept as ``int``; arithmetic on them is much cheaper."""
    if type(c) is int:
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class Universe:
    """Declared variables, unknowns and parameters of a jet space."""

    def __init__(self, base: Iterable[str], unknowns: Iterable[str],
                 params: Iterable[str] = ()):
        self.base = tuple(base)
        self.unknowns = tuple(unknowns)
        self.symbols = list(self.unknowns)
        names = list(self.base) + self.symbols
        if len(set(names)) != len(names):
            raise JetError(f"duplicate declaration among {names}")
        self.rules: dict[int, dict[int, DiffPoly]] = {}
        self.inverses: dict[int, DiffPoly] = {}
        self._dcache: dict[tuple[Var, int], DiffPoly] = {}
        self._pcache: dict[tuple[int, Var], DiffPoly] = {}
        self._active: set[tuple[Var, int]] = set()
        for p in params:
            self.add_param(p)

    # declarations
    @property
    def n(self) -> int:
        return len(self.base)

    @property
    def m(self) -> int:
        return len(self.unknowns)

    @property
    def params(self) -> tuple[str, ...]:
        return tuple(self.symbols[self.m:])

    def add_param(self, name: str) -> int:
        if name in self.symbols or name in self.base:
            raise JetError(f"duplicate declaration of {name!r}")
        self.symbols.append(name)
        self._dcache.clear()
        return len(self.symbols) - 1

    def symbol_index(self, name: str) -> int:
        try:
            return self.symbols.index(name)
        except ValueError:
            raise JetError(f"unknown symbol {name!r}") from None

    def set_rule(self, param: str, direction: int | str, poly: DiffPoly) -> None:
        s = self.symbol_index(param)
        if s < self.m:
            raise JetError(f"{param!r} is an unknown, not a parameter")
        if isinstance(direction, str):
            direction = self.base.index(direction)
        self._check(poly)
        self.rules.setdefault(s, {})[direction] = poly
        self._dcache.clear()
        self._pcache.clear()

    def add_inverse(self, d: DiffPoly, name: str | None = None) -> DiffPoly:
        """Register a symbol ``t`` with ``t*d = 1`` and return it.

        Its derivatives follow ``D_i t = -t^2 D_i d``.
        """
        self._check(d)
        if d.is_zero():
            raise JetError("cannot invert zero")
        if name is None:
            k = len(self.inverses) + 1
            name = f"inv{k}"
            while name in self.symbols or name in self.base:
                name += "_"
        s = self.add_param(name)
        self.inverses[s] = d
        t = self.jet(name)
        for i in range(self.n):
            self.rules.setdefault(s, {})[i] = -(t * t) * d.derivative(i)
        self._pcache.clear()
        return t

    def is_unknown(self, v: Var) -> bool:
        return v.kind == 1 and v.sym < self.m

    def is_param(self, v: Var) -> bool:
        return v.kind == 1 and v.sym >= self.m

    # constructors
    def base_var(self, name: str) -> Var:
        return Var(0, self.base.index(name), 0, ())

    def jet_var(self, name: str, index: MultiIndex | None = None) -> Var:
        s = self.symbol_index(name)
        index = tuple(index) if index is not None else (0,) * self.n
        if len(index) != self.n or any(k < 0 for k in index):
            raise JetError(f"bad multi-index {index} for {name!r}")
        return Var(1, s, sum(index), index)

    def x(self, name: str) -> DiffPoly:
        return DiffPoly.var(self, self.base_var(name))

    def jet(self, name: str, index: MultiIndex | None = None) -> DiffPoly:
        return DiffPoly.var(self, self.jet_var(name, index))

    def const(self, c: Scalar) -> DiffPoly:
        return DiffPoly.const(self, c)

    def var_name(self, v: Var) -> str:
        if v.kind == 0:
            return self.base[v.sym]
        name = self.symbols[v.sym]
        if v.order == 0:
            return name
        return f"{name}[{','.join(map(str, v.index))}]"

    # derivatives of single variables
    def dvar(self, v: Var, i: int) -> DiffPoly:
        key = (v, i)
        hit = self._dcache.get(key)
        if hit is not None:
            return hit
        if v.kind == 0:
            out = DiffPoly.const(self, 1 if v.sym == i else 0)
        else:
            rule = self.rules.get(v.sym, {}).get(i) if v.sym >= self.m else None
            if rule is None:
                idx = mi_add(v.index, unit(self.n, i))
                out = DiffPoly.var(self, Var(1, v.sym, v.order + 1, idx))
            else:
                if key in self._active or len(self._active) >= MAX_RULE_DEPTH:
                    raise RuleCycleError(
                        f"derivative rules for {self.symbols[v.sym]!r} do not terminate")
                self._active.add(key)
                try:
                    out = rule.multi_derivative(v.index)
                finally:
                    self._active.discard(key)
        self._dcache[key] = out
        return out

    def param_partial(self, p: Var, v: Var) -> DiffPoly:
        """Dependence of a parameter jet on an unknown jet.

        Inverse symbols use ``dt/dv = -t^2 dd/dv``.  Parameters with rules
        are taken to depend on base variables and order-0 unknowns, so the
        partial is read off as the coefficient of ``v + 1_i`` in ``D_i p``.
        """
        key = (p.sym, v)
        hit = self._pcache.get(key)
        if hit is not None:
            return hit
        zero = DiffPoly.const(self, 0)
        out = zero
        if p.order == 0 and p.sym in self.inverses:
            t = DiffPoly.var(self, p)
            out = -(t * t) * self.inverses[p.sym].chain_partial(v)
        elif p.order == 0 and p.sym in self.rules and v.order == 0:
            for i, rule in sorted(self.rules[p.sym].items()):
                w = Var(1, v.sym, 1, unit(self.n, i))
                out = rule.partial(w)
                break
        self._pcache[key] = out
        return out

    def _check(self, f: DiffPoly) -> None:
        if f.universe is not self and f.universe != self:
            raise UniverseMismatchError("polynomials live in different universes")

    def signature(self) -> tuple:
        rules = tuple(sorted((s, tuple(sorted((i, tuple(sorted(p.terms.items())))
                                              for i, p in r.items())))
                             for s, r in self.rules.items()))
        inv = tuple(sorted((s, tuple(sorted(d.terms.items()))) for s, d in self.inverses.items()))
        return (self.base, self.m, tuple(self.symbols), rules, inv)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Universe):
            return NotImplemented
        return self.signature() == other.signature()

    def __hash__(self) -> int:
        return hash((self.base, tuple(self.symbols)))

    def __repr__(self) -> str:
        return (f"Universe(base={list(self.base)}, unknowns={list(self.unknowns)}, "
                f"params={list(self.params)})")


# -- polynomials -------------------------------------------------------------

class DiffPoly:
    """Sparse polynomial in base and jet variables with rational coefficients."""

    __slots__ = ("universe", "terms")

    def __init__(self, universe: Universe, terms: Mapping[Monomial, Scalar] | None = None):
        self.universe = universe
        self.terms: dict[Monomial, Fraction] = {
            m: _num(c) for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def _raw(cls, universe: Universe, terms: dict[Monomial, Fraction]) -> DiffPoly:
        obj = cls.__new__(cls)
        obj.universe = universe
        obj.terms = terms
        return obj

    @classmethod
    def const(cls, universe: Universe, c: Scalar) -> DiffPoly:
        return cls._raw(universe, {(): _num(c)} if c else {})

    @classmethod
    def var(cls, universe: Universe, v: Var) -> DiffPoly:
        return cls._raw(universe, {((v, 1),): 1})

    # inspection
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise JetError(f"{self} is not constant")
        return self.terms.get((), Fraction(0))

    def variables(self) -> set[Var]:
        return {v for m in self.terms for v, _ in m}

    def degree(self) -> int:
        return max((_mono_degree(m) for m in self.terms), default=-1)

    def order(self) -> int:
        """Highest order of an unknown jet; parameter jets do not count."""
        if not self.terms:
            raise ZeroOrderError("the zero polynomial has no order")
        u = self.universe
        return max((v.order for v in self.variables() if u.is_unknown(v)), default=0)

    # arithmetic
    def _coerce(self, other) -> DiffPoly:
        if isinstance(other, DiffPoly):
            self.universe._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return DiffPoly.const(self.universe, other)
        return NotImplemented

    def __add__(self, other) -> DiffPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s.numerator if type(s) is Fraction and s.denominator == 1 else s
            else:
                terms.pop(m, None)
        return DiffPoly._raw(self.universe, terms)

    __radd__ = __add__

    def __neg__(self) -> DiffPoly:
        return DiffPoly._raw(self.universe, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> DiffPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> DiffPoly:
        return (-self) + other

    def __mul__(self, other) -> DiffPoly:
        if isinstance(other, (int, Fraction)):
            if not other:
                return DiffPoly._raw(self.universe, {})
            other = _num(other)
            return DiffPoly._raw(self.universe, {m: _num(c * other) for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = terms.get(m, 0) + c1 * c2
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        for m, c in terms.items():
            if type(c) is Fraction and c.denominator == 1:
                terms[m] = c.numerator
        return DiffPoly._raw(self.universe, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> DiffPoly:
        if k < 0:
            raise ValueError("negative exponent")
        out = DiffPoly.const(self.universe, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.terms == ({(): Fraction(other)} if other else {})
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self.terms == other.terms and (
            self.universe is other.universe or self.universe == other.universe)

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # calculus
    def partial(self, v: Var) -> DiffPoly:
        """Formal partial derivative treating every variable as independent."""
        terms: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            for k, (w, e) in enumerate(m):
                if w == v:
                    rest = m[:k] + (((w, e - 1),) if e > 1 else ()) + m[k + 1:]
                    terms[rest] = terms.get(rest, 0) + c * e
                    break
        return DiffPoly(self.universe, terms)

    def chain_partial(self, v: Var) -> DiffPoly:
        """Partial in an unknown jet, seeing through parameters that depend on it."""
        u = self.universe
        out = self.partial(v)
        for p in self.variables():
            if u.is_param(p) and p.order == 0:
                dp = u.param_partial(p, v)
                if not dp.is_zero():
                    out = out + self.partial(p) * dp
        return out

    def unknown_dependencies(self) -> set[Var]:
        """Unknown jets this polynomial depends on, directly or via parameters."""
        u = self.universe
        out = {v for v in self.variables() if u.is_unknown(v)}
        for p in self.variables():
            if u.is_param(p) and p.order == 0:
                if p.sym in u.inverses:
                    out |= u.inverses[p.sym].unknown_dependencies()
                elif p.sym in u.rules:
                    out |= {Var(1, j, 0, (0,) * u.n) for j in range(u.m)}
        return out

    def derivative(self, i: int) -> DiffPoly:
        """Total derivative ``D_i``."""
        u = self.universe
        terms: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            for k, (v, e) in enumerate(m):
                dv = u.dvar(v, i)
                if not dv.terms:
                    continue
                rest = m[:k] + (((v, e - 1),) if e > 1 else ()) + m[k + 1:]
                ce = c * e
                for m2, c2 in dv.terms.items():
                    mm = _mono_mul(rest, m2)
                    s = terms.get(mm, 0) + ce * c2
                    if s:
                        terms[mm] = s
                    else:
                        terms.pop(mm, None)
        return DiffPoly._raw(u, terms)

    def multi_derivative(self, sigma: MultiIndex) -> DiffPoly:
        """``D_sigma`` as a composition of commuting total derivatives."""
        out = self
        for i, k in enumerate(sigma):
            for _ in range(k):
                out = out.derivative(i)
        return out

    def evaluate(self, point: Mapping[Var, Fraction]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                try:
                    t *= point[v] ** e
                except KeyError:
                    raise JetError(f"no value for {self.universe.var_name(v)}") from None
            total += t
        return total

    def substitute(self, values: Mapping[Var, DiffPoly]) -> DiffPoly:
        """Replace variables by polynomials of the same universe."""
        out = DiffPoly.const(self.universe, 0)
        for m, c in self.terms.items():
            t = DiffPoly.const(self.universe, c)
            rest = []
            for v, e in m:
                if v in values:
                    t = t * values[v] ** e
                else:
                    rest.append((v, e))
            out = out + t * DiffPoly._raw(self.universe, {tuple(rest): 1})
        return out

    # printing
    def _sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        def key(item):
            m = item[0]
            return (-_mono_degree(m), [(-v.kind, -v.order, v.sym, [-k for k in v.index], -e)
                                       for v, e in reversed(m)])
        return sorted(self.terms.items(), key=key)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        u = self.universe
        parts = []
        for m, c in self._sorted_terms():
            factors = [u.var_name(v) + (f"^{e}" if e > 1 else "")
                       for v, e in m]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"DiffPoly({self})"


def total_derivative(f: DiffPoly, i: int) -> DiffPoly:
    return f.derivative(i)


def order(f: DiffPoly) -> int:
    return f.order()

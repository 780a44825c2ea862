"""A PDE system: named scalar equations over a shared universe."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .diffops import VectorDiffOp, linearize
from .jetcalc import DiffPoly, JetError, Universe


@dataclass
class PDESystem:
    name: str
    universe: Universe
    equations: list[DiffPoly]
    eq_names: list[str] = field(default_factory=list)
    invertibles: list[DiffPoly] = field(default_factory=list)
    inverse_symbols: list[DiffPoly] = field(default_factory=list)

    def __post_init__(self):
        if not self.eq_names:
            self.eq_names = [f"F{i + 1}" for i in range(len(self.equations))]
        if len(self.eq_names) != len(self.equations):
            raise JetError("one name per equation")
        for f in self.equations + self.invertibles:
            self.universe._check(f)
            if f.is_zero():
                raise JetError("zero equation or invertible")

    @classmethod
    def build(cls, name: str, universe: Universe, equations, invertibles=()) -> PDESystem:
        """Register inverse symbols for ``invertibles`` and wrap the equations.

        ``equations`` is a list of polynomials or ``(name, polynomial)`` pairs.
        """
        names, polys = [], []
        for i, e in enumerate(equations):
            if isinstance(e, tuple):
                names.append(e[0])
                polys.append(e[1])
            else:
                names.append(f"F{i + 1}")
                polys.append(e)
        inv = list(invertibles)
        syms = [universe.add_inverse(d) for d in inv]
        return cls(name, universe, polys, names, inv, syms)

    @property
    def n(self) -> int:
        return self.universe.n

    @property
    def m(self) -> int:
        return self.universe.m

    @property
    def r(self) -> int:
        return len(self.equations)

    @property
    def orders(self) -> list[int]:
        return [f.order() for f in self.equations]

    def linearizations(self) -> list[VectorDiffOp]:
        return [linearize(f) for f in self.equations]

    def subsets(self) -> list[tuple[int, ...]]:
        """All (m+1)-subsets of equation indices, in lexicographic order."""
        return list(combinations(range(self.r), self.m + 1))

    def is_linear(self) -> bool:
        u = self.universe
        for f in self.equations:
            for mono in f.terms:
                if sum(e for v, e in mono if u.is_unknown(v)) != 1:
                    return False
                if any(u.is_param(v) and v.sym in u.inverses for v, _ in mono):
                    return False
        return True

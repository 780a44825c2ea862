"""Reduced multi-brackets and the three-way compatibility verdict."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..brackets import coordinate_multibracket, multibracket
from ..jetcalc import DiffPoly, JetError
from ..system import PDESystem
from .groebner import BudgetExceeded
from .ring import IdealModel

COMPATIBLE = "compatible-certified"
OBSTRUCTED = "obstructed"
INCONCLUSIVE = "inconclusive"


@dataclass
class BracketResult:
    subset: tuple[int, ...]
    names: list[str]
    s: int
    value: DiffPoly | None
    normal_form: DiffPoly | None
    status: str              # "zero", "nonzero" or "budget"
    note: str = ""

    def as_dict(self) -> dict:
        return {"subset": [i + 1 for i in self.subset], "names": self.names, "reduced_modulo": f"J_{self.s}",
                "normal_form": None if self.normal_form is None else str(self.normal_form),
                "status": self.status, "note": self.note}


@dataclass
class CompatibilityReport:
    verdict: str
    brackets: list[BracketResult]
    gci: dict | None
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "brackets": [b.as_dict() for b in self.brackets],
                "gci": self.gci, "notes": self.notes}


def bracket_of(system: PDESystem, subset: Sequence[int], form: str = "coordinate") -> DiffPoly:
    fs = [system.equations[i] for i in subset]
    if form == "coordinate":
        return coordinate_multibracket(fs)
    if form == "linearization":
        return multibracket(fs)
    raise ValueError(f"unknown bracket form {form!r}")


class Reducer:
    """Shares one Groebner basis per truncation order across brackets."""

    def __init__(self, system: PDESystem, max_degree: int = 24, max_monomials: int = 200_000):
        self.system = system
        self.max_degree = max_degree
        self.max_monomials = max_monomials
        self._models: dict[int, IdealModel] = {}

    def model(self, s: int, extra: Sequence[DiffPoly] = ()) -> IdealModel:
        if s not in self._models:
            self._models[s] = IdealModel(self.system, s, extra, self.max_degree, self.max_monomials)
        return self._models[s]

    def normal_form(self, f: DiffPoly, s: int) -> DiffPoly:
        return self.model(s, [f]).normal_form(f)


def reduced_bracket(system: PDESystem, subset: Sequence[int], form: str = "coordinate",
                    reducer: Reducer | None = None) -> BracketResult:
    """Normal form of the bracket of ``subset`` modulo ``J_{sum l - 1}``."""
    if len(subset) != system.m + 1:
        raise JetError(f"a bracket needs {system.m + 1} equations")
    reducer = reducer or Reducer(system)
    orders = system.orders
    s = sum(orders[i] for i in subset) - 1
    names = [system.eq_names[i] for i in subset]
    value = bracket_of(system, subset, form)
    try:
        nf = reducer.normal_form(value, s)
    except BudgetExceeded as exc:
        return BracketResult(tuple(subset), names, s, value, None, "budget", str(exc))
    return BracketResult(tuple(subset), names, s, value, nf, "zero" if nf.is_zero() else "nonzero")


def check_compatibility(system: PDESystem, max_degree: int = 24, max_monomials: int = 200_000,
                        seed: int = 0, subsets: Sequence[Sequence[int]] | None = None,
                        form: str = "coordinate") -> CompatibilityReport:
    """Reduce every bracket and combine with the complete-intersection test.

    ``compatible-certified`` needs the test to pass and every normal form to
    vanish; any nonzero normal form means ``obstructed``; everything else is
    ``inconclusive``.
    """
    from ..symbolic.gci import gci_check
    from ..symbolic.symbols import DegeneratePointError, symbols_of

    m, r = system.m, system.r
    if r < m:
        raise JetError(f"underdetermined system: r = {r} < m = {m}")
    notes: list[str] = []
    if r == m:
        notes.append("determined system: no brackets to check")
        return CompatibilityReport(COMPATIBLE, [], None, notes)

    gci = None
    for attempt in range(3):
        try:
            report = gci_check(symbols_of(system, seed + attempt))
            gci = report.as_dict()
            break
        except DegeneratePointError as exc:
            notes.append(f"seed {seed + attempt}: {exc}")
    if gci is None:
        notes.append("no generic point found for the symbol test")

    reducer = Reducer(system, max_degree, max_monomials)
    chosen = [tuple(s) for s in subsets] if subsets is not None else system.subsets()
    results = [reduced_bracket(system, s, form, reducer) for s in chosen]

    if any(b.status == "nonzero" for b in results):
        verdict = OBSTRUCTED
    elif gci is not None and gci["holds"] and all(b.status == "zero" for b in results) \
            and subsets is None:
        verdict = COMPATIBLE
    else:
        verdict = INCONCLUSIVE
        if any(b.status == "budget" for b in results):
            notes.append("a Groebner computation exceeded its budget")
        if gci is not None and not gci["holds"]:
            notes.append("brackets vanish but the complete-intersection test fails; "
                         "the vanishing is necessary, not sufficient")
        if subsets is not None:
            notes.append("only a selection of brackets was checked")
    return CompatibilityReport(verdict, results, gci, notes)

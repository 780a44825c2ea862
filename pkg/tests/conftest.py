from __future__ import annotations

import random
from fractions import Fraction

import pytest

from jetbracket.cli import FIXTURES, parse
from jetbracket.diffops import LinDiffOp, VectorDiffOp
from jetbracket.jetcalc import DiffPoly, Universe, indices_up_to
from jetbracket.system import PDESystem

ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)


def fixture_system(name: str) -> PDESystem:
    return parse(FIXTURES[name].text).system()


def killing_generic() -> PDESystem:
    return fixture_system("killing")


def quadratic_integrals() -> PDESystem:
    return fixture_system("quadratic_integrals")


def minimal_surface() -> PDESystem:
    return fixture_system("minimal_surface")


def random_poly(u: Universe, rng: random.Random, degree: int = 1, order: int = 1,
                terms: int = 3) -> DiffPoly:
    """Small random polynomial in base variables and unknown jets."""
    gens = [u.x(b) for b in u.base]
    gens += [u.jet(s, sigma) for s in u.unknowns for sigma in indices_up_to(u.n, order)]
    out = u.const(rng.randint(-3, 3))
    for _ in range(terms):
        mono = u.const(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        for _ in range(rng.randint(1, degree)):
            mono = mono * rng.choice(gens)
        out = out + mono
    return out


def random_op(u: Universe, rng: random.Random, order: int = 2, coeff_degree: int = 1) -> LinDiffOp:
    """Operator of order <= ``order`` with coefficients affine in the base variables."""
    coeffs = {}
    for sigma in indices_up_to(u.n, rng.randint(0, order)):
        c = u.const(rng.randint(-2, 2))
        if coeff_degree:
            for b in u.base:
                c = c + rng.randint(-2, 2) * u.x(b)
        coeffs[sigma] = c
    return LinDiffOp(u, coeffs)


def random_row(u: Universe, rng: random.Random, **kw) -> VectorDiffOp:
    return VectorDiffOp(random_op(u, rng, **kw) for _ in range(u.m))


@pytest.fixture
def rng():
    return random.Random(20240611)

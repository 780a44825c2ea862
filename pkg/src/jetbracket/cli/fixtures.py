"""Worked examples shipped as system files, with their expected outcomes."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Fixture:
    name: str
    summary: str
    text: str
    verdict: str | None = None          # expected compat verdict
    dims: tuple[int, int] | None = None  # expected (p, d)
    slow: bool = False
    notes: tuple[str, ...] = field(default_factory=tuple)


_CR = """\
system {name}
base x y
unknown u v
{decl}eq E1 = u[1,0] - v[0,1]
eq E2 = u[0,1] + v[1,0]
"""


def _cr(name: str, decl: str, third: str | None) -> str:
    text = _CR.format(name=name, decl=decl)
    if third is not None:
        text += f"eq E3 = u[1,0]*v[0,1] - u[0,1]*v[1,0] - {third}\n"
    return text


_CR_GENERIC = """\
param G [diff x -> Gu*u[1,0] + Gv*v[1,0], y -> Gu*u[0,1] + Gv*v[0,1]]
param Gu [diff x -> Guu*u[1,0] + Guv*v[1,0], y -> Guu*u[0,1] + Guv*v[0,1]]
param Gv [diff x -> Guv*u[1,0] + Gvv*v[1,0], y -> Guv*u[0,1] + Gvv*v[0,1]]
param Guu
param Guv
param Gvv
invertible G
"""

_KILLING = """\
# isothermal metric E*(dx^2 + dy^2) with E = exp(lam)
system {name}
base x y
unknown u v
{params}invertible E
eq E1 = 2*u[1,0]*E + u*E[1,0] + v*E[0,1]
eq E2 = E*u[0,1] + E*v[1,0]
eq E3 = 2*v[0,1]*E + u*E[1,0] + v*E[0,1]
"""

_QUADRATIC = """\
# conformal factor exp(lam); unknowns are the coefficients of a quadratic integral
# P stands for exp(-lam) and only enters the curvature K = -P*(lam[2,0] + lam[0,2])/2
system quadratic_integrals
base x y
unknown u v w
param lam
param P [diff x -> -P*lam[1,0], y -> -P*lam[0,1]]
eq E1 = u[1,0] + lam[1,0]*u + lam[0,1]*v
eq E2 = u[0,1] + 2*v[1,0] + lam[1,0]*v + lam[0,1]*w
eq E3 = 2*v[0,1] + w[1,0] + lam[1,0]*u + lam[0,1]*v
eq E4 = w[0,1] + lam[1,0]*v + lam[0,1]*w
"""

_MINIMAL = """\
# minimal surfaces z = u(x,y) of prescribed Gaussian curvature K
system minimal_surface
base x y
unknown u
param K
invertible K
eq F1 = u[2,0]*u[0,2] - u[1,1]^2 - K*(1 + u[1,0]^2 + u[0,1]^2)^2
eq F2 = (1 + u[0,1]^2)*u[2,0] - 2*u[1,0]*u[0,1]*u[1,1] + (1 + u[1,0]^2)*u[0,2]
"""

_CONICS = """\
# two constant-coefficient second-order equations with coprime symbols
system conics
base x y
unknown u
eq F1 order 2 = u[2,0] + 2*u[1,1] - u[0,2]
eq F2 order 2 = u[2,0] - u[1,1] + 3*u[0,2] + u
"""

_FLOWS = """\
system commuting_flows
base x y
unknown u v
eq E1 = u[1,0] - v
eq E2 = v[1,0] - u
eq E3 = u[0,1]
eq E4 = v[0,1]
"""

FIXTURES: dict[str, Fixture] = {f.name: f for f in [
    Fixture("cr", "Cauchy-Riemann equations (determined)", _cr("cr", "", None),
            verdict="compatible-certified"),
    Fixture("cr_jacobian_G1", "Cauchy-Riemann with Jacobian 1",
            _cr("cr_jacobian_G1", "", "1"), verdict="compatible-certified"),
    Fixture("cr_jacobian_G_u", "Cauchy-Riemann with Jacobian u, u invertible",
            _cr("cr_jacobian_G_u", "invertible u\n", "u"), verdict="obstructed"),
    Fixture("cr_jacobian_exp_u", "Cauchy-Riemann with Jacobian exp(u)",
            _cr("cr_jacobian_exp_u", "param G [diff x -> G*u[1,0], y -> G*u[0,1]]\ninvertible G\n", "G"),
            verdict="compatible-certified"),
    Fixture("cr_jacobian_exp_u2", "Cauchy-Riemann with Jacobian exp(u^2)",
            _cr("cr_jacobian_exp_u2",
                "param G [diff x -> 2*u*G*u[1,0], y -> 2*u*G*u[0,1]]\ninvertible G\n", "G"),
            verdict="obstructed"),
    Fixture("cr_jacobian_generic", "Cauchy-Riemann with Jacobian G(u,v), chain rules up to second order",
            _cr("cr_jacobian_generic", _CR_GENERIC, "G"), verdict="obstructed"),
    Fixture("killing", "Killing vectors of a generic isothermal metric",
            _KILLING.format(name="killing",
                            params="param E [diff x -> E*lam[1,0], y -> E*lam[0,1]]\nparam lam\n"),
            verdict="obstructed"),
    Fixture("killing_flat", "Killing vectors of the flat metric (lam = 0)",
            _KILLING.format(name="killing_flat", params="param E [diff x -> 0, y -> 0]\n"),
            verdict="compatible-certified"),
    Fixture("killing_x2", "Killing vectors for lam = x^2",
            _KILLING.format(name="killing_x2", params="param E [diff x -> 2*x*E, y -> 0]\n"),
            verdict="obstructed"),
    Fixture("quadratic_integrals", "Quadratic integrals of a conformally flat metric", _QUADRATIC,
            verdict="obstructed", slow=True),
    Fixture("minimal_surface", "Minimal surfaces of prescribed curvature", _MINIMAL,
            verdict="inconclusive", slow=True,
            notes=("the truncated Groebner basis exceeds the default degree budget",)),
    Fixture("conics", "Two generic second-order scalar equations in the plane", _CONICS,
            verdict="compatible-certified", dims=(0, 4)),
    Fixture("commuting_flows", "Constant-coefficient commuting flows (r = n + m, outside GCI range)",
            _FLOWS, verdict="inconclusive"),
]}

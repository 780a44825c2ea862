import pytest

from conftest import fixture_system
from jetbracket.diffops import LinDiffOp
from jetbracket.idealmod.syzygy import SyzygyNotFound, _CoefficientRing, first_syzygy
from jetbracket.jetcalc import JetError, Universe
from jetbracket.system import PDESystem


def test_commuting_derivatives():
    u = Universe(["x", "y"], ["u"], ["a", "b"])
    system = PDESystem.build("t", u, [u.jet("u", (1, 0)), u.jet("u", (0, 1))])
    op = first_syzygy(system, (0, 1))
    assert all(b.is_zero() for b in op.B)
    assert op(system.equations).is_zero()
    a, b = u.jet("a"), u.jet("b")
    assert op([a, b]) == a.derivative(1) * -1 + b.derivative(0)


def test_variable_coefficient_needs_inverse():
    u = Universe(["x", "y"], ["u"])
    eqs = [u.jet("u", (1, 0)), u.x("x") * u.jet("u", (0, 1))]
    with pytest.raises(SyzygyNotFound):
        first_syzygy(PDESystem.build("t", u, eqs), (0, 1))

    u = Universe(["x", "y"], ["u"])
    x = u.x("x")
    system = PDESystem.build("t", u, [u.jet("u", (1, 0)), x * u.jet("u", (0, 1))], invertibles=[x])
    op = first_syzygy(system, (0, 1))
    t = system.inverse_symbols[0]
    assert op.B[1] == LinDiffOp.mult(t)
    assert op.B[0].is_zero()
    # the result is x * inv(x) * u_y - u_y, zero once inv(x) * x = 1 is used
    res = op(system.equations)
    assert not res.is_zero()
    assert _CoefficientRing(system, [res]).normal_terms(res) == {}


def test_two_unknowns_constant_rows():
    u = Universe(["x", "y"], ["u", "v"])
    eqs = [u.jet("u", (1, 0)), u.jet("v", (0, 1)), u.jet("u") + u.jet("v")]
    system = PDESystem.build("t", u, eqs)
    op = first_syzygy(system, (0, 1, 2))
    assert all(b.is_zero() for b in op.B)
    assert op(system.equations).is_zero()
    row = op.as_row(3)
    assert len(row) == 3 and not row[2].is_zero()


def test_commuting_flows_fixture():
    system = fixture_system("commuting_flows")
    for sub in system.subsets():
        op = first_syzygy(system, sub)
        assert op(system.equations).is_zero()
        # applied to the row operators componentwise, the syzygy is the zero operator
        row = op.as_row(system.r)
        lin = system.linearizations()
        for j in range(system.m):
            total = LinDiffOp.zero(system.universe)
            for k in range(system.r):
                total = total + row[k] @ lin[k][j]
            assert total.is_zero()


def test_nonlinear_rejected():
    system = fixture_system("cr_jacobian_G1")
    with pytest.raises(JetError):
        first_syzygy(system, (0, 1, 2))

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import fixture_system
from jetbracket.jetcalc import Universe
from jetbracket.symbolic.buchsbaum_rim import buchsbaum_rim_exactness
from jetbracket.symbolic.gci import affine_dimension, gci_check, generic_gci_rows, minors
from jetbracket.symbolic.linalg import nullspace, rank
from jetbracket.symbolic.spencer import (NotStabilized, dim_g, elementary_symmetric,
                                         expected_hilbert, expected_spencer_totals, hilbert_data,
                                         spencer_cohomology, two_dim_formula)
from jetbracket.symbolic.symbols import (DegeneratePointError, SymbolSystem, format_xi,
                                         generic_rows, symbols_of)
from jetbracket.system import PDESystem

ONE = Fraction(1)


def test_cr_symbols():
    sym = symbols_of(fixture_system("cr"))
    assert sym.rows == [[{(1, 0): ONE}, {(0, 1): -ONE}], [{(0, 1): ONE}, {(1, 0): ONE}]]
    assert sym.orders == [1, 1]


def test_degenerate_point():
    # an invertible x - y vanishes at the seeded points where x and y coincide
    u = Universe(["x", "y"], ["u"])
    d = u.x("x") - u.x("y")
    system = PDESystem.build("t", u, [d * u.jet("u", (1, 0))], invertibles=[d])
    hits = 0
    for seed in range(200):
        try:
            sym = symbols_of(system, seed)
        except DegeneratePointError:
            hits += 1
        else:
            assert list(sym.rows[0][0]) == [(1, 0)]
    assert 0 < hits < 200


def test_dim_g_examples():
    conics = symbols_of(fixture_system("conics"))
    assert [dim_g(conics, i) for i in range(5)] == [1, 2, 1, 0, 0]
    cr = symbols_of(fixture_system("cr"))
    assert [dim_g(cr, i) for i in range(4)] == [2, 2, 2, 2]
    u = Universe(["x", "y", "z"], ["u"])
    single = symbols_of(PDESystem.build("t", u, [u.jet("u", (1, 0, 0))]))
    assert [dim_g(single, i) for i in range(4)] == [1, 2, 3, 4]


def test_hilbert_examples():
    cr = hilbert_data(symbols_of(fixture_system("cr")))
    assert (cr.p, cr.d, cr.finite_type) == (1, 2, False)
    conics = hilbert_data(symbols_of(fixture_system("conics")))
    assert (conics.p, conics.d, conics.finite_type) == (0, 4, True)
    u = Universe(["x", "y", "z"], ["u"])
    single = hilbert_data(symbols_of(PDESystem.build("t", u, [u.jet("u", (1, 0, 0))])))
    assert (single.p, single.d) == (2, 1)
    assert single(10) == 11


def test_hilbert_cap():
    u = Universe(["x", "y", "z"], ["u"])
    sym = symbols_of(PDESystem.build("t", u, [u.jet("u", (1, 0, 0))]))
    with pytest.raises(NotStabilized):
        hilbert_data(sym, cap=2)


def test_spencer_cr():
    table = spencer_cohomology(symbols_of(fixture_system("cr")), 4)
    assert table.nonzero() == {(0, 0): 2, (0, 1): 2}
    assert table.column_total(0) == 2


def test_spencer_conics():
    table = spencer_cohomology(symbols_of(fixture_system("conics")), 5)
    assert table.nonzero() == {(0, 0): 1, (1, 1): 2, (2, 2): 1}
    assert table.euler_characteristic() == 0


def test_expected_tables():
    assert expected_spencer_totals(1, 2, 2) == {0: 1, 1: 2, 2: 1}
    assert expected_spencer_totals(2, 3, 3) == {0: 2, 1: 3, 2: 1, 3: 0}
    assert expected_hilbert(1, 2, 3, [2, 3]) == (1, 6)
    assert elementary_symmetric([1, 2, 3], 2) == 11
    assert elementary_symmetric([4], 0) == 1


def test_two_dim_formula_small_cases():
    assert [two_dim_formula(1, [2, 2], i) for i in range(5)] == [1, 2, 1, 0, 0]
    assert [two_dim_formula(1, [1, 3], i) for i in range(5)] == [1, 1, 1, 0, 0]


def test_gci_rejections():
    sym, _ = generic_gci_rows(2, 1, [2, 2])
    assert gci_check(sym).holds
    twice = SymbolSystem(2, 1, [sym.rows[0], sym.rows[0]], [2, 2])
    rep = gci_check(twice)
    assert not rep.holds and rep.dim_top == 1
    flows = gci_check(symbols_of(fixture_system("commuting_flows")))
    assert not flows.range_ok and not flows.holds


def test_affine_dimension():
    # xi1 * xi2 = 0 in the plane: two lines, dimension 1
    assert affine_dimension([{(1, 1): ONE}], 2) == 1
    assert affine_dimension([{(1, 0): ONE}, {(0, 1): ONE}], 2) == 0
    assert affine_dimension([], 3) == 3
    sym = generic_rows(2, 1, [1, 1], seed=3)
    assert len(minors(sym, 1)) == 2


def test_buchsbaum_rim_generic():
    sym, _ = generic_gci_rows(2, 1, [1, 2], seed=2)
    rep = buchsbaum_rim_exactness(sym, max_degree=5)
    assert rep.exact and rep.compositions_vanish and rep.first_failure() is None


def test_linalg():
    rows = [{"a": ONE, "b": ONE}, {"a": 2 * ONE, "b": 2 * ONE}, {"c": ONE}]
    assert rank(rows) == 2
    ns = nullspace(rows, ["a", "b", "c"])
    assert len(ns) == 1
    v = ns[0]
    assert v.get("a", 0) + v.get("b", 0) == 0 and v.get("c", 0) == 0


def test_format_xi():
    assert format_xi({}) == "0"
    text = format_xi({(2, 0): ONE, (0, 1): Fraction(-3, 2)})
    assert "xi1^2" in text and "xi2" in text


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 4),
       st.lists(st.integers(min_value=1, max_value=3), min_size=2, max_size=2))
def test_two_dim_dims_match_formula(seed, orders):
    try:
        sym, _ = generic_gci_rows(2, 1, orders, seed=seed)
    except ValueError:
        return
    for i in range(sum(orders) + 2):
        assert dim_g(sym, i) == two_dim_formula(1, orders, i)


@settings(max_examples=10, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 4))
def test_generic_hilbert_matches_expected(seed):
    sym, _ = generic_gci_rows(3, 1, [1, 2], seed=seed)
    h = hilbert_data(sym)
    assert (h.p, h.d) == expected_hilbert(1, 2, 3, [1, 2])

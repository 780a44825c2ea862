import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_op, random_row
from jetbracket.diffops import (FiltrationError, LinDiffOp, ShapeError, VectorDiffOp, compose,
                                multibracket_linear, ndet, opposite_multibracket_linear,
                                plucker_sides)
from jetbracket.jetcalc import Universe


@pytest.fixture
def u2():
    return Universe(["x", "y"], ["u", "v"])


def D(u, *sigma):
    return LinDiffOp.d(u, tuple(sigma))


def mult(c):
    return LinDiffOp.mult(c)


def test_compose_examples(u2):
    x = u2.x("x")
    assert compose(D(u2, 1, 0), mult(x)) == LinDiffOp(u2, {(1, 0): x, (0, 0): 1})
    assert compose(D(u2, 1, 0), D(u2, 0, 1)) == D(u2, 1, 1)
    xd = LinDiffOp(u2, {(1, 0): x})
    assert compose(xd, xd) == LinDiffOp(u2, {(2, 0): x ** 2, (1, 0): x})


def test_ndet_examples(u2):
    x = u2.x("x")
    one = mult(u2.const(1))
    got = ndet([[D(u2, 1, 0), D(u2, 0, 1)], [mult(x), one]])
    assert got == D(u2, 1, 0) - LinDiffOp(u2, {(0, 1): x})
    assert ndet([[one, LinDiffOp.zero(u2)], [LinDiffOp.zero(u2), one]]) == one
    a, b = D(u2, 1, 0), mult(x)
    assert ndet([[a, b], [a, b]]).is_zero()
    with pytest.raises(ShapeError):
        ndet([[a, b]])


def test_ndet_not_skew_in_columns(u2):
    # the column order fixes the composition order
    x = u2.x("x")
    one = mult(u2.const(1))
    m = [[D(u2, 1, 0), one], [one, mult(x)]]
    assert ndet(m) == LinDiffOp(u2, {(1, 0): x})
    swapped = [[r[1], r[0]] for r in m]
    assert ndet(swapped) == one - LinDiffOp(u2, {(1, 0): x})
    assert ndet(swapped) != -ndet(m)


def test_symbol_examples(u2):
    op = D(u2, 2, 0) + D(u2, 0, 1)
    assert op.symbol(2) == {(2, 0): u2.const(1)}
    x = u2.x("x")
    assert LinDiffOp(u2, {(0, 1): x}).symbol(1) == {(0, 1): x}
    with pytest.raises(FiltrationError):
        op.symbol(1)


def test_multibracket_linear_examples(u2):
    one = mult(u2.const(1))
    z = LinDiffOp.zero(u2)
    rows = [VectorDiffOp([D(u2, 1, 0), z]), VectorDiffOp([z, D(u2, 0, 1)]), VectorDiffOp([one, one])]
    assert multibracket_linear(rows).is_zero()
    u1 = Universe(["x", "y"], ["u"])
    a = VectorDiffOp([D(u1, 1, 0)])
    b = VectorDiffOp([LinDiffOp(u1, {(0, 1): u1.x("x")})])
    assert multibracket_linear([a, b]) == VectorDiffOp([compose(a[0], b[0]) - compose(b[0], a[0])])
    with pytest.raises(ShapeError):
        multibracket_linear([a])


def test_opposite_bracket(u2):
    rng = random.Random(3)
    u1 = Universe(["x", "y"], ["u"])
    for _ in range(10):
        rows = [random_row(u1, rng) for _ in range(2)]
        assert opposite_multibracket_linear(rows) == multibracket_linear(rows)
    # constant coefficients: both vanish and so agree
    for _ in range(5):
        rows = [random_row(u2, rng, coeff_degree=0) for _ in range(3)]
        assert opposite_multibracket_linear(rows) == multibracket_linear(rows)


def test_plucker_constant_first_order(u2):
    rng = random.Random(4)
    rows = [random_row(u2, rng, order=1, coeff_degree=0) for _ in range(4)]
    for i in range(2):
        left, right = plucker_sides(rows, i)
        assert left == right


seeds = st.integers(min_value=0, max_value=10 ** 6)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_skew_symmetry(seed):
    rng = random.Random(seed)
    u = Universe(["x", "y"], ["u", "v"])
    rows = [random_row(u, rng, order=1) for _ in range(3)]
    b = multibracket_linear(rows)
    assert multibracket_linear([rows[2], rows[1], rows[0]]) == -b


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_compose_associative_and_symbol_multiplicative(seed):
    rng = random.Random(seed)
    u = Universe(["x", "y"], ["u"])
    a, b, c = (random_op(u, rng, order=2) for _ in range(3))
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    ab = compose(a, b)
    ka, kb = a.order, b.order
    prod = {}
    for s, p in a.symbol(ka).items():
        for t, q in b.symbol(kb).items():
            e = tuple(i + j for i, j in zip(s, t))
            prod[e] = prod[e] + p * q if e in prod else p * q
    prod = {e: v for e, v in prod.items() if not v.is_zero()}
    assert ab.symbol(ka + kb) == prod


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_ndet_additive_and_skew_in_rows(seed):
    rng = random.Random(seed)
    u = Universe(["x", "y"], ["u", "v"])
    m = [[random_op(u, rng, order=1) for _ in range(2)] for _ in range(2)]
    extra = [random_op(u, rng, order=1) for _ in range(2)]
    assert ndet([m[1], m[0]]) == -ndet(m)
    summed = [[m[0][0] + extra[0], m[0][1] + extra[1]], m[1]]
    assert ndet(summed) == ndet(m) + ndet([extra, m[1]])


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_plucker_random(seed):
    rng = random.Random(seed)
    for m in (1, 2):
        u = Universe(["x", "y"], ["u", "v"][:m])
        rows = [random_row(u, rng, order=2 if m == 1 else 1) for _ in range(m + 2)]
        for i in range(m):
            left, right = plucker_sides(rows, i)
            assert left == right

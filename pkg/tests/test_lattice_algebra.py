import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import corpus
from regprim.distribution import (
    Distribution,
    IntervalSpec,
    alexiewicz_norm,
    convert_order,
    dirac_derivative,
    integrate_interval,
    translate,
    zero,
)
from regprim.errors import NotContinuousPrimitive, NotNonnegative, OrderMismatch
from regprim.lattice_algebra import (
    Tri,
    absolute,
    approximate_identity,
    approximate_identity_check,
    is_nonnegative,
    join,
    jordan,
    l_space_counterexample,
    m_space_check,
    meet,
    order_leq,
    product,
)
from regprim.numeric_core import Poly
from regprim.piecewise import (
    PiecewiseFn,
    clamped_ramp,
    differentiate,
    evaluate,
    hat,
)

TOL = Fraction(1, 10**9)
DELTA = dirac_derivative(0)
seeds = st.integers(0, 10**6)


# x - 1/2 on (0, 1], zero elsewhere: changes sign at 1/2
SHIFTED = PiecewiseFn.build([0, 1], [0, [Fraction(-1, 2), 1], 0], [0, Fraction(1, 2)])


def lin(rng, n=None):
    return Distribution.from_primitive(corpus.linear_primitive(rng), n or rng.randint(1, 3))


def triple(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    return tuple(Distribution.from_primitive(corpus.linear_primitive(rng), n) for _ in range(3))


# ---------------------------------------------------------------------------
# Order
# ---------------------------------------------------------------------------


def test_delta_is_nonnegative():
    assert order_leq(zero(1), DELTA) is Tri.TRUE
    assert order_leq(DELTA, zero(1)) is Tri.FALSE
    with pytest.raises(OrderMismatch):
        order_leq(DELTA, zero(2))


def test_nonnegative_primitive_with_sign_changing_derivative():
    # F = (1 - x^2)^2 on [-1, 1]; F'' = 12x^2 - 4 takes both signs
    bump = Poly((1, 0, -1)) ** 2
    F = PiecewiseFn.build([-1, 1], [0, bump, 0])
    f = Distribution.from_primitive(F, 2)
    assert order_leq(zero(2), f) is Tri.TRUE
    second = differentiate(differentiate(F))
    assert evaluate(second, 0) < 0 < evaluate(second, Fraction(9, 10))


def test_nonnegativity_detects_irrational_dips():
    # x^2 - 2 dips below zero only on (-sqrt 2, sqrt 2)
    F = PiecewiseFn.build([-2, 2], [0, Poly((-2, 0, 1)), 0])
    assert not is_nonnegative(F)
    assert is_nonnegative(PiecewiseFn.build([-2, 2], [0, Poly((0, 0, 1)), 0]))
    assert not is_nonnegative(PiecewiseFn.build([0], [0, 0], [-1]))


def test_antisymmetry():
    rng = random.Random(211)
    for _ in range(30):
        f = lin(rng)
        g = Distribution.from_primitive(f.F + PiecewiseFn.constant(0), f.order)
        assert order_leq(f, g) and order_leq(g, f) and f == g
        if f.order == 1:
            h = f + translate(DELTA, corpus.rat(rng))
            assert order_leq(f, h) and not order_leq(h, f)


@settings(max_examples=60, deadline=None)
@given(seed=seeds)
def test_order_matches_join(seed):
    f1, f2, _ = triple(seed)
    assert bool(order_leq(f1, f2)) == (join(f1, f2).value == f2)
    assert bool(order_leq(f1, f2)) == (meet(f1, f2).value == f1)


# ---------------------------------------------------------------------------
# Lattice operations
# ---------------------------------------------------------------------------


def test_join_examples():
    assert join(DELTA, zero(1)).value == DELTA
    assert meet(DELTA, zero(1)).value == zero(1)
    a = absolute(Distribution.from_primitive(SHIFTED, 1))
    assert a.exact
    assert a.value.F == PiecewiseFn.build(
        [0, Fraction(1, 2), 1], [0, [Fraction(1, 2), -1], [Fraction(-1, 2), 1], 0], [0, 0, Fraction(1, 2)]
    )


def test_abs_preserves_norm():
    rng = random.Random(223)
    for _ in range(40):
        f = Distribution.from_primitive(corpus.primitive(rng), rng.randint(1, 3))
        a = absolute(f)
        lo, hi = alexiewicz_norm(f, TOL)
        alo, ahi = alexiewicz_norm(a.value, TOL)
        assert alo <= hi and lo <= ahi
    for _ in range(40):
        f = lin(rng)
        assert alexiewicz_norm(absolute(f).value) == alexiewicz_norm(f)


def test_higher_degree_crossings_are_flagged():
    F = PiecewiseFn.build([-2, 2], [0, Poly((-2, 0, 1)), 2])
    assert not join(Distribution.from_primitive(F, 2), zero(2)).exact


@settings(max_examples=60, deadline=None)
@given(seed=seeds)
def test_lattice_laws(seed):
    f, g, h = triple(seed)

    def J(a, b):
        r = join(a, b)
        assert r.exact
        return r.value

    def M(a, b):
        r = meet(a, b)
        assert r.exact
        return r.value

    assert J(f, g) == J(g, f) and M(f, g) == M(g, f)
    assert J(J(f, g), h) == J(f, J(g, h))
    assert M(M(f, g), h) == M(f, M(g, h))
    assert J(f, M(f, g)) == f and M(f, J(f, g)) == f
    assert M(f, J(g, h)) == J(M(f, g), M(f, h))
    # modular law: f <= h implies f v (g ^ h) = (f v g) ^ h
    fh = M(f, h)
    assert J(fh, M(g, h)) == M(J(fh, g), h)


def test_jordan_examples():
    d = jordan(DELTA)
    assert d.exact and d.plus == DELTA and d.minus == zero(1)
    f = Distribution.from_primitive(SHIFTED, 1)
    d = jordan(f, [corpus.multiplier(random.Random(5), 0, None)])
    assert evaluate(d.plus.F, Fraction(1, 4)) == 0 and evaluate(d.minus.F, Fraction(1, 4)) == Fraction(1, 4)
    assert evaluate(d.plus.F, Fraction(3, 4)) == Fraction(1, 4) and evaluate(d.minus.F, Fraction(3, 4)) == 0


def test_jordan_parts_have_smaller_norm():
    rng = random.Random(227)
    for _ in range(40):
        n = rng.randint(1, 3)
        f = Distribution.from_primitive(corpus.linear_primitive(rng), n)
        ms = [corpus.multiplier(rng, n - 1, corpus.lam(rng) if n > 1 else None) for _ in range(3)]
        d = jordan(f, ms)
        assert d.exact
        norm = alexiewicz_norm(f)[1]
        assert alexiewicz_norm(d.plus)[1] <= norm and alexiewicz_norm(d.minus)[1] <= norm


# ---------------------------------------------------------------------------
# Algebra
# ---------------------------------------------------------------------------


def test_dirac_idempotent():
    for m in range(4):
        d = dirac_derivative(m)
        assert product(d, d) == d
    with pytest.raises(OrderMismatch):
        product(DELTA, dirac_derivative(1))


def test_zero_divisors():
    f1 = Distribution.from_primitive(hat(0, 1), 2)
    f2 = Distribution.from_primitive(hat(3, 1), 2)
    assert f1 != zero(2) and f2 != zero(2)
    assert product(f1, f2) == zero(2)


def test_product_integral_to_a_factors():
    rng = random.Random(229)
    for _ in range(30):
        F1 = corpus.primitive(rng, continuous=True)
        F2 = corpus.primitive(rng, continuous=True)
        f1, f2 = Distribution.from_primitive(F1, 1), Distribution.from_primitive(F2, 1)
        a = corpus.rat(rng)
        spec = IntervalSpec.parse(f"(-inf,{a}]")
        assert integrate_interval(product(f1, f2), spec) == integrate_interval(f1, spec) * integrate_interval(f2, spec)


def test_product_depends_on_order():
    # same element written at order 1 and order 2 multiplies differently
    f = Distribution.from_primitive(clamped_ramp(), 2)
    low = convert_order(f, 1)
    assert convert_order(product(low, low), 2) != product(f, f)


@settings(max_examples=40, deadline=None)
@given(seed=seeds)
def test_algebra_laws(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    f, g, h = (Distribution.from_primitive(corpus.primitive(rng, max_deg=2), n) for _ in range(3))
    assert product(f, g) == product(g, f)
    assert product(product(f, g), h) == product(f, product(g, h))
    assert product(f, g + h) == product(f, g) + product(f, h)
    assert alexiewicz_norm(product(f, g), TOL)[0] <= alexiewicz_norm(f, TOL)[1] * alexiewicz_norm(g, TOL)[1]


# ---------------------------------------------------------------------------
# Structural checks
# ---------------------------------------------------------------------------


def test_l_space_counterexample():
    assert l_space_counterexample() == {"F1": 1, "F2": 1, "sum": 1, "join": 1}
    f1 = Distribution.from_primitive(hat(0, 1), 1)
    f2 = Distribution.from_primitive(hat(2, 1), 1)
    assert m_space_check(f1, f2)
    assert m_space_check(f1, f1)


def test_m_space_on_random_nonnegative_pairs():
    rng = random.Random(233)
    for _ in range(30):
        n = rng.randint(1, 3)
        f1 = absolute(Distribution.from_primitive(corpus.linear_primitive(rng), n)).value
        f2 = absolute(Distribution.from_primitive(corpus.linear_primitive(rng), n)).value
        assert m_space_check(f1, f2)
        # exact on degree <= 1 data
        assert alexiewicz_norm(join(f1, f2).value)[1] == max(alexiewicz_norm(f1)[1], alexiewicz_norm(f2)[1])
    with pytest.raises(NotNonnegative):
        m_space_check(-DELTA, DELTA)


def test_approximate_identity_examples():
    u = approximate_identity(3)
    assert evaluate(u, -3) == 0 and evaluate(u, Fraction(-5, 2)) == Fraction(1, 2) and evaluate(u, -2) == 1
    ramp = Distribution.from_primitive(clamped_ramp(), 2)
    assert approximate_identity_check(ramp, 1) == 0
    assert approximate_identity_check(ramp, 5) == 0
    with pytest.raises(NotContinuousPrimitive):
        approximate_identity_check(DELTA, 3)


def test_approximate_identity_nonincreasing():
    rng = random.Random(239)
    for _ in range(10):
        f = Distribution.from_primitive(corpus.primitive(rng, continuous=True, max_deg=2), 2)
        values = [approximate_identity_check(f, k, TOL) for k in range(1, 8)]
        for a, b in zip(values, values[1:]):
            assert b <= a + TOL
        assert values[-1] == 0


def test_approximate_identity_bound_by_left_tail():
    F = PiecewiseFn.build([-6, 0], [0, [6, 1], 6])  # ramp rising from -6
    f = Distribution.from_primitive(F, 1)
    for k in range(1, 8):
        # F is nonnegative and increasing, so its sup left of 1 - k is F(1 - k)
        assert approximate_identity_check(f, k) <= evaluate(F, 1 - k)

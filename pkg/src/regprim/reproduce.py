"""Worked values recomputed by the engine, as (case, expected, computed, passed) rows."""

from __future__ import annotations

import math
from fractions import Fraction

from .distribution import (
    Distribution,
    IntervalSpec,
    alexiewicz_norm,
    convert_order,
    dirac_derivative,
    integrate,
    integrate_interval,
    reconstruct,
    translate,
)
from .errors import NotInTargetSpace
from .lattice_algebra import l_space_counterexample, product
from .oracle import NumericFn, numeric_integral, numeric_sup_norm
from .piecewise import PiecewiseFn, clamped_ramp, heaviside, point_indicator
from .spaces import BVFunction, Multiplier


def _row(case, expected, computed) -> tuple:
    return case, str(expected), str(computed), expected == computed


def _rows_exact():
    delta = dirac_derivative(0)
    g = PiecewiseFn.build([-1, 1], [Fraction(1, 3), [Fraction(1, 2), Fraction(1, 4)], 2], [0, 5])
    yield _row("delta_pairing", g(0), integrate(delta, Multiplier(0, BVFunction(g))))

    for n in range(1, 6):
        for lam in (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1)):
            f = dirac_derivative(n - 1)
            m = Multiplier.from_g(heaviside(lam), n - 1, lam)
            expected = (-1) ** (n - 1) * lam
            yield _row(f"lambda_dependence_n{n}_lam{lam}", expected, integrate(f, m, lam))

    for m in range(5):
        lo, hi = alexiewicz_norm(dirac_derivative(m))
        yield _row(f"dirac_norm_m{m}", Fraction(1), lo if lo == hi else f"[{lo}, {hi}]")

    a = Fraction(3, 2)
    ramp = Distribution.from_primitive(clamped_ramp(-1, 1), 1)
    spike = Multiplier(0, BVFunction(point_indicator(0, a)))
    yield _row("point_spike_pairing", 0, integrate(ramp, spike))
    yield _row("point_spike_pairing_jump", a, integrate(delta, spike))

    F = PiecewiseFn.build([-1, 0, 2], [0, [1, 1], [1, 0, -1], -3])
    for n in (1, 2, 3):
        f = Distribution.from_primitive(F, n)
        yield _row(f"ftc_n{n}_x1/2", F(Fraction(1, 2)), reconstruct(f, Fraction(1, 2)))

    yield _row("interval_point_delta", 1, integrate_interval(delta, IntervalSpec.parse("{0}")))

    pair = l_space_counterexample()
    yield _row("m_space_join_norm", 1, pair["join"])
    yield _row("l_space_sum_norm", 1, pair["sum"])

    for n in range(4):
        d = dirac_derivative(n)
        yield _row(f"idempotence_n{n}", True, product(d, d) == d)

    f = delta - translate(delta, 1)
    yield _row("promote_to_continuous_order2", True, convert_order(f, 2, True).is_continuous)
    try:
        convert_order(delta, 2)
        outcome = "accepted"
    except NotInTargetSpace:
        outcome = "NotInTargetSpace"
    yield _row("delta_not_order2", "NotInTargetSpace", outcome)


def _rows_numeric(tol=1e-6):
    gauss = NumericFn(lambda x: math.exp(-x * x), "gaussian")
    n1 = numeric_sup_norm(gauss, (-6.0, 6.0))
    prim2 = NumericFn(lambda x: numeric_integral(gauss, -math.inf, x, 1e-10))
    n2 = numeric_sup_norm(prim2, (-8.0, 8.0), grid=201)
    yield "gaussian_derivative_norm_order1", "1", f"{n1:.9f}", abs(n1 - 1) <= tol
    root_pi = math.sqrt(math.pi)
    yield "gaussian_derivative_norm_order2", f"{root_pi:.9f}", f"{n2:.9f}", abs(n2 - root_pi) <= tol


def worked_rows() -> list:
    return list(_rows_exact()) + list(_rows_numeric())

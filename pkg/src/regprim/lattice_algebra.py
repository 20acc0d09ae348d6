"""Order, lattice and algebra structure carried over from the primitives.

f <= g exactly when the primitives satisfy F <= G pointwise; join, meet and
product act on primitives pointwise. All decisions about signs are made
exactly via root isolation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .distribution import Distribution, integrate
from .errors import NotContinuousPrimitive, NotNonnegative, OrderMismatch
from .numeric_core import ExtReal, as_rational, isolate_roots
from .piecewise import (
    PiecewiseFn,
    cells,
    hat,
    multiply,
    pointwise_max,
    pointwise_min,
    sup_norm,
)
from .spaces import DEFAULT_TOL

_ZERO = Fraction(0)
_LATTICE_TOL = Fraction(1, 10**12)


class Tri(enum.Enum):
    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "Unknown"

    def __bool__(self):
        return self is Tri.TRUE


@dataclass(frozen=True)
class LatticeResult:
    value: Distribution
    exact: bool


def _same_order(f1: Distribution, f2: Distribution):
    if f1.order != f2.order:
        raise OrderMismatch(f"orders {f1.order} and {f2.order}")


def _cell_sample_points(p, lo: ExtReal, hi: ExtReal) -> list:
    """Rational points of the open cell, one between each pair of consecutive roots of p."""
    if p.degree <= 0:
        if lo.is_finite and hi.is_finite:
            return [(lo.value + hi.value) / 2]
        if lo.is_finite:
            return [lo.value + 1]
        if hi.is_finite:
            return [hi.value - 1]
        return [_ZERO]
    if not (lo.is_finite and hi.is_finite):
        raise ValueError("non-constant piece on an unbounded cell")
    a, b = lo.value, hi.value
    roots = isolate_roots(p, a, b)
    bounds = [a] + [x for iv in roots for x in (iv.lo, iv.hi)] + [b]
    points = []
    for u, v in zip(bounds[::2], bounds[1::2]):
        x = (u + v) / 2 if u < v else u
        points.append(x)
    return points


def is_nonnegative(fn: PiecewiseFn) -> bool:
    """Exact decision of fn >= 0 everywhere, point values included."""
    if any(v < 0 for v in fn.point_values):
        return False
    for lo, hi, p in cells(fn):
        if not p:
            continue
        if any(p(x) < 0 for x in _cell_sample_points(p, lo, hi)):
            return False
    return True


def order_leq(f1: Distribution, f2: Distribution, tol=DEFAULT_TOL) -> Tri:
    """Whether f1 precedes f2, i.e. F1 <= F2 everywhere.

    Exact rational data always yields TRUE or FALSE; UNKNOWN is kept for
    callers that treat the answer as three-valued.
    """
    _same_order(f1, f2)
    return Tri.TRUE if is_nonnegative(f2.F - f1.F) else Tri.FALSE


def join(f1: Distribution, f2: Distribution, tol=_LATTICE_TOL) -> LatticeResult:
    _same_order(f1, f2)
    fn, exact = pointwise_max(f1.F, f2.F, as_rational(tol))
    return LatticeResult(Distribution.from_primitive(fn, f1.order), exact)


def meet(f1: Distribution, f2: Distribution, tol=_LATTICE_TOL) -> LatticeResult:
    _same_order(f1, f2)
    fn, exact = pointwise_min(f1.F, f2.F, as_rational(tol))
    return LatticeResult(Distribution.from_primitive(fn, f1.order), exact)


def absolute(f: Distribution, tol=_LATTICE_TOL) -> LatticeResult:
    return join(f, -f, tol)


def _zero_like(f: Distribution) -> Distribution:
    return Distribution.from_primitive(PiecewiseFn.constant(0), f.order)


@dataclass(frozen=True)
class JordanDecomposition:
    plus: Distribution
    minus: Distribution
    exact: bool


def jordan(f: Distribution, multipliers=(), tol=_LATTICE_TOL) -> JordanDecomposition:
    """f = f+ - f- with f+ = f v 0 and f- = (-f) v 0.

    When every crossing is exact the identities f = f+ - f- and
    |f| = f+ + f- are checked, and so is the splitting of the integral
    against each multiplier in ``multipliers``.
    """
    z = _zero_like(f)
    plus = join(f, z, tol)
    minus = join(-f, z, tol)
    exact = plus.exact and minus.exact
    if exact:
        assert plus.value - minus.value == f
        assert plus.value + minus.value == absolute(f, tol).value
        for m in multipliers:
            assert integrate(f, m) == integrate(plus.value, m) - integrate(minus.value, m)
    return JordanDecomposition(plus.value, minus.value, exact)


def product(f1: Distribution, f2: Distribution) -> Distribution:
    _same_order(f1, f2)
    return Distribution.from_primitive(multiply(f1.F, f2.F), f1.order)


def l_space_counterexample() -> dict:
    """Norms for the triangle pair 1 - |x| on [-1, 1] and 1 - |x - 2| on [1, 3]."""
    F1, F2 = hat(0, 1), hat(2, 1)
    joined, _ = pointwise_max(F1, F2)
    return {
        "F1": sup_norm(F1)[1],
        "F2": sup_norm(F2)[1],
        "sum": sup_norm(F1 + F2)[1],
        "join": sup_norm(joined)[1],
    }


def m_space_check(f1: Distribution, f2: Distribution, tol=DEFAULT_TOL) -> bool:
    """Check that the norm of f1 v f2 is max of the norms, and that the L-space identity fails.

    The comparison allows for the widths of the certified enclosures.
    """
    _same_order(f1, f2)
    tol = as_rational(tol)
    z = _zero_like(f1)
    if not (order_leq(z, f1) and order_leq(z, f2)):
        raise NotNonnegative("both arguments must be nonnegative")
    j = join(f1, f2)
    jl, jh = sup_norm(j.value.F, tol)
    l1, h1 = sup_norm(f1.F, tol)
    l2, h2 = sup_norm(f2.F, tol)
    ml, mh = max(l1, l2), max(h1, h2)
    m_holds = jl <= mh and ml <= jh
    pair = l_space_counterexample()
    l_fails = pair["sum"] == 1 and pair["F1"] + pair["F2"] == 2
    return bool(m_holds and l_fails)


def approximate_identity(k: int) -> PiecewiseFn:
    """u_k: 0 for x <= -k, x + k on [-k, 1 - k], 1 for x >= 1 - k."""
    return PiecewiseFn.build([-k, 1 - k], [0, [k, 1], 1])


def approximate_identity_check(f: Distribution, k: int, tol=DEFAULT_TOL) -> Fraction:
    """Upper bound of the certified enclosure of sup |F - u_k F|."""
    if not f.is_continuous:
        raise NotContinuousPrimitive("approximate identity check needs a continuous primitive")
    F = f.F
    return sup_norm(F - multiply(approximate_identity(k), F), as_rational(tol))[1]

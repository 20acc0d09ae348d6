"""Distributions of finite order stored through their regulated primitives.

A :class:`Distribution` of order n is the n-th distributional derivative of
a left-continuous piecewise-polynomial primitive that vanishes at -inf.
Everything here reduces to exact Stieltjes integrals of that primitive.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import (
    DegenerateAffine,
    DegreeTooHigh,
    ExponentTooSmall,
    LambdaMismatch,
    NotCompactSupport,
    NotContinuousPrimitive,
    NotInTargetSpace,
    NotMonotone,
    NotSmoothEnough,
    OrderMismatch,
    OrderTooHigh,
    RegPrimError,
)
from .numeric_core import NEG_INF, POS_INF, ZERO_POLY, ExtReal, Poly, as_rational, isolate_roots, poly_definite_integral
from .piecewise import (
    PiecewiseFn,
    _cell_pieces,
    cells,
    clamped_ramp,
    compose_affine,
    differentiate,
    evaluate,
    heaviside,
    indicator,
    integrate_from,
    is_smooth,
    limit_left,
    limit_right,
    multiply,
    normalize,
    shift,
    sup_norm,
    union_breakpoints,
)
from .spaces import (
    DEFAULT_TOL,
    BVFunction,
    Multiplier,
    RegulatedPrimitive,
    _taylor_at_zero,
    inverse_In,
    validate_Br,
)
from .stieltjes import coincident_jump_sum, hs_integral, hs_integral_g_dF

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Distribution:
    """f = D^order F for the stored primitive F."""

    order: int
    primitive: RegulatedPrimitive

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be at least 1")

    @classmethod
    def from_primitive(cls, fn: PiecewiseFn, order: int) -> Distribution:
        return cls(order, validate_Br(fn))

    @property
    def F(self) -> PiecewiseFn:
        return self.primitive.fn

    @property
    def is_continuous(self) -> bool:
        return self.primitive.is_continuous

    def _same_order(self, other: Distribution):
        if self.order != other.order:
            raise OrderMismatch(f"orders {self.order} and {other.order}")

    def __add__(self, other: Distribution) -> Distribution:
        self._same_order(other)
        return Distribution.from_primitive(self.F + other.F, self.order)

    def __sub__(self, other: Distribution) -> Distribution:
        self._same_order(other)
        return Distribution.from_primitive(self.F - other.F, self.order)

    def __neg__(self) -> Distribution:
        return Distribution.from_primitive(-self.F, self.order)

    def __mul__(self, c) -> Distribution:
        return Distribution.from_primitive(self.F * as_rational(c), self.order)

    __rmul__ = __mul__


def zero(order: int) -> Distribution:
    return Distribution.from_primitive(PiecewiseFn.constant(0), order)


def dirac_derivative(m: int) -> Distribution:
    """The m-th derivative of the Dirac distribution, of order m + 1."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return Distribution.from_primitive(heaviside(0), m + 1)


# ---------------------------------------------------------------------------
# The integral
# ---------------------------------------------------------------------------


def _check_pair(f: Distribution, m: Multiplier, lam) -> None:
    if m.order != f.order - 1:
        raise OrderMismatch(f"distribution of order {f.order} needs a multiplier of order {f.order - 1}")
    if f.is_continuous or lam is None:
        return
    lam = as_rational(lam)
    if m.lam is not None and m.lam != lam:
        raise LambdaMismatch(f"multiplier normalized with {m.lam}, integral asked for {lam}")


def integrate_routes(f: Distribution, m: Multiplier) -> tuple:
    """Both evaluation routes of the pairing, for cross-checking.

    The first uses integration by parts with the coincident-jump sum, the
    second integrates g against the primitive directly.
    """
    F, g = f.F, m.g.fn
    sign = -1 if f.order % 2 == 0 else 1
    by_parts = F.v_pos_inf * g.v_pos_inf - hs_integral(F, g) - coincident_jump_sum(F, g)
    direct = hs_integral_g_dF(g, F)
    return sign * by_parts, sign * direct


def integrate(f: Distribution, m: Multiplier, lam=None) -> Fraction:
    """Exact value of the integral of f times the multiplier h."""
    _check_pair(f, m, lam)
    by_parts, direct = integrate_routes(f, m)
    assert by_parts == direct, (by_parts, direct)
    return by_parts


class IntervalKind(enum.Enum):
    OPEN_OPEN = "OpenOpen"
    OPEN_CLOSED = "OpenClosed"
    CLOSED_OPEN = "ClosedOpen"
    CLOSED_CLOSED = "ClosedClosed"
    POINT = "Point"
    TO_NEG_INF = "ToNegInf"
    TO_POS_INF = "ToPosInf"
    FULL_LINE = "FullLine"


_NUM = r"\s*([-+]?[0-9./]+|[-+]?inf)\s*"
_INTERVAL_RE = re.compile(r"^([\[(])" + _NUM + "," + _NUM + r"([\])])$")
_POINT_RE = re.compile(r"^\{" + _NUM + r"\}$")


@dataclass(frozen=True)
class IntervalSpec:
    """An interval of the real line.

    For the half-lines ``closed`` says whether the finite endpoint belongs
    to the interval: ToNegInf is (-inf, a) or (-inf, a], ToPosInf is
    (a, inf) or [a, inf).
    """

    kind: IntervalKind
    a: Fraction | None = None
    b: Fraction | None = None
    closed: bool = False

    def __post_init__(self):
        two = {
            IntervalKind.OPEN_OPEN,
            IntervalKind.OPEN_CLOSED,
            IntervalKind.CLOSED_OPEN,
            IntervalKind.CLOSED_CLOSED,
        }
        if self.a is not None:
            object.__setattr__(self, "a", as_rational(self.a))
        if self.b is not None:
            object.__setattr__(self, "b", as_rational(self.b))
        if self.kind in two and not self.a < self.b:
            raise ValueError("need a < b")

    @classmethod
    def parse(cls, text: str) -> IntervalSpec:
        """Parse "{a}", "(a,b)", "[a,b)", "(-inf,a]", "[a,inf)", "(-inf,inf)" and friends."""
        text = text.strip()
        m = _POINT_RE.match(text)
        if m:
            return cls(IntervalKind.POINT, Fraction(m.group(1)))
        m = _INTERVAL_RE.match(text)
        if not m:
            raise ValueError(f"cannot parse interval {text!r}")
        lb, a, b, rb = m.groups()
        a, b = ExtReal.of(a), ExtReal.of(b)
        if not a.is_finite and not b.is_finite:
            return cls(IntervalKind.FULL_LINE)
        if not a.is_finite:
            return cls(IntervalKind.TO_NEG_INF, b=b.value, closed=rb == "]")
        if not b.is_finite:
            return cls(IntervalKind.TO_POS_INF, a=a.value, closed=lb == "[")
        kind = {
            ("(", ")"): IntervalKind.OPEN_OPEN,
            ("(", "]"): IntervalKind.OPEN_CLOSED,
            ("[", ")"): IntervalKind.CLOSED_OPEN,
            ("[", "]"): IntervalKind.CLOSED_CLOSED,
        }[(lb, rb)]
        return cls(kind, a.value, b.value)

    def indicator(self) -> PiecewiseFn:
        k = self.kind
        if k is IntervalKind.FULL_LINE:
            return PiecewiseFn.constant(1)
        if k is IntervalKind.POINT:
            return PiecewiseFn((self.a,), (ZERO_POLY, ZERO_POLY), (1,))
        if k is IntervalKind.TO_NEG_INF:
            return PiecewiseFn((self.b,), (Poly.const(1), ZERO_POLY), (int(self.closed),))
        if k is IntervalKind.TO_POS_INF:
            return PiecewiseFn((self.a,), (ZERO_POLY, Poly.const(1)), (int(self.closed),))
        left = k in (IntervalKind.CLOSED_OPEN, IntervalKind.CLOSED_CLOSED)
        right = k in (IntervalKind.OPEN_CLOSED, IntervalKind.CLOSED_CLOSED)
        return indicator(self.a, self.b, left, right)


def integrate_interval(f: Distribution, spec: IntervalSpec, g: PiecewiseFn | None = None) -> Fraction:
    """Integral of a first-order distribution over an interval.

    Without ``g`` this is the closed-form difference of one-sided limits of
    the primitive; with ``g`` it is the pairing of f with g times the
    indicator of the interval.
    """
    if f.order != 1:
        raise OrderTooHigh("interval integrals exist only for first-order distributions")
    F = f.F
    if g is not None:
        m = Multiplier(0, BVFunction(multiply(g, spec.indicator())))
        return integrate(f, m)
    a, b, k = spec.a, spec.b, spec.kind
    if k is IntervalKind.FULL_LINE:
        return F.v_pos_inf
    if k is IntervalKind.POINT:
        return limit_right(F, a) - limit_left(F, a)
    if k is IntervalKind.TO_NEG_INF:
        return limit_right(F, b) if spec.closed else limit_left(F, b)
    if k is IntervalKind.TO_POS_INF:
        return F.v_pos_inf - (limit_left(F, a) if spec.closed else limit_right(F, a))
    upper = limit_right(F, b) if k in (IntervalKind.OPEN_CLOSED, IntervalKind.CLOSED_CLOSED) else limit_left(F, b)
    lower = limit_left(F, a) if k in (IntervalKind.CLOSED_OPEN, IntervalKind.CLOSED_CLOSED) else limit_right(F, a)
    return upper - lower


# ---------------------------------------------------------------------------
# Norms, translation, reconstruction
# ---------------------------------------------------------------------------


def alexiewicz_norm(f: Distribution, tol=DEFAULT_TOL) -> tuple:
    """Enclosure of the sup norm of the primitive."""
    return sup_norm(f.F, as_rational(tol))


def translate(f: Distribution, t) -> Distribution:
    return Distribution.from_primitive(shift(f.F, t), f.order)


def ftc_multiplier(n: int, x) -> Multiplier:
    """Multiplier of order n - 1 whose pairing with D^n F returns F(x).

    Its g is (-1)^(n-1) times the indicator of (-inf, x), normalized with
    lam = 1, so h differs from (x - t)^(n-1) H0(x - t) / (n-1)! by a
    polynomial of degree at most n - 2.
    """
    x = as_rational(x)
    s = -1 if n % 2 == 0 else 1
    g = PiecewiseFn((x,), (Poly.const(s), ZERO_POLY), (0,))
    return Multiplier(n - 1, BVFunction(g, 1))


def reconstruct(f: Distribution, x) -> Fraction:
    """F(x) recovered as the integral of f against the FTC multiplier."""
    return integrate(f, ftc_multiplier(f.order, x), 1)


def pair_test_function(f: Distribution, phi: PiecewiseFn) -> Fraction:
    """<f, phi> = (-1)^n times the integral of F phi^(n)."""
    n = f.order
    if not phi.is_constant_tails or phi.v_neg_inf != 0 or phi.v_pos_inf != 0:
        raise NotCompactSupport("test functions must vanish outside a bounded interval")
    if not is_smooth(phi, n - 1):
        raise NotSmoothEnough(f"test function must be C^{n - 1}")
    dphi = phi
    for _ in range(n):
        dphi = differentiate(dphi)
    F = f.F
    bps = union_breakpoints(F, dphi)
    fp, dp = _cell_pieces(F, bps), _cell_pieces(dphi, bps)
    total = _ZERO
    for i in range(1, len(bps)):
        total += poly_definite_integral(fp[i] * dp[i], bps[i - 1], bps[i])
    return total if n % 2 == 0 else -total


def _pairing_with_g(f: Distribution, g: PiecewiseFn) -> Fraction:
    F = f.F
    sign = -1 if f.order % 2 == 0 else 1
    return sign * hs_integral_g_dF(g, F)


def moments(f: Distribution, k: int) -> Fraction:
    """Integral of f against x^k, for 0 <= k <= order - 2.

    The (order-1)-th derivative of x^k is the multiplier's g; it is the zero
    function throughout the admissible range, so the pairing is computed
    through that g.
    """
    n = f.order
    if k < 0 or k > n - 2:
        raise DegreeTooHigh(f"moment {k} is outside 0..{n - 2}")
    g = PiecewiseFn.polynomial(Poly.monomial(k).deriv(n - 1))
    return _pairing_with_g(f, g)


# ---------------------------------------------------------------------------
# Change of variables
# ---------------------------------------------------------------------------


def compose_distribution(f: Distribution, a, b) -> Distribution:
    """f composed with x -> a x + b, as a distribution of the same order."""
    a, b = as_rational(a), as_rational(b)
    if a == 0:
        raise DegenerateAffine("affine map with zero slope")
    G = compose_affine(f.F, a, b)
    G = G - PiecewiseFn.constant(G.v_neg_inf)
    G = normalize(G, 0) * (1 / a**f.order)
    return Distribution.from_primitive(G, f.order)


def compose_multiplier(m: Multiplier, a, b) -> Multiplier:
    """h composed with x -> a x + b, reduced modulo polynomials of degree < order."""
    a, b = as_rational(a), as_rational(b)
    if a == 0:
        raise DegenerateAffine("affine map with zero slope")
    lam = m.lam
    if lam is not None and a < 0:
        lam = 1 - lam
    if m.order == 0:
        return Multiplier(0, BVFunction(compose_affine(m.g.fn, a, b), lam))
    hp = compose_affine(m.h, a, b)
    P = _taylor_at_zero(hp, m.order - 1)
    hp = hp - PiecewiseFn.polynomial(P)
    return Multiplier(m.order, inverse_In(hp, m.order, lam), hp)


def change_variables(f: Distribution, m: Multiplier, a, b) -> tuple:
    """(lhs, rhs): the pairing of f and h, and |a| times that of the composed pair."""
    a = as_rational(a)
    lhs = integrate(f, m)
    rhs = abs(a) * integrate(compose_distribution(f, a, b), compose_multiplier(m, a, b))
    return lhs, rhs


# ---------------------------------------------------------------------------
# Order conversion
# ---------------------------------------------------------------------------


def convert_order(f: Distribution, target: int, want_continuous: bool = False) -> Distribution:
    """Rewrite f as a distribution of another order, when that is possible.

    Raising the order integrates the primitive from -inf; the result must
    stay bounded. Lowering the order by k differentiates the primitive k
    times, which needs it to be C^(k-1); the last derivative is taken
    left-continuous.
    """
    if target < 1:
        raise ValueError("target order must be at least 1")
    F = f.F
    if target > f.order:
        for _ in range(target - f.order):
            F = integrate_from(F, "-inf")
            if not F.is_constant_tails:
                raise NotInTargetSpace("primitive becomes unbounded at +inf")
    elif target < f.order:
        k = f.order - target
        if not is_smooth(F, k - 1):
            raise NotInTargetSpace(f"primitive is not C^{k - 1}, so its derivative is not regulated")
        for _ in range(k):
            F = differentiate(F, 0)
    try:
        out = Distribution.from_primitive(F, target)
    except RegPrimError as exc:
        raise NotInTargetSpace(f"{type(exc).__name__}: {exc}") from exc
    if want_continuous and not out.is_continuous:
        raise NotInTargetSpace("primitive is not continuous")
    return out


# ---------------------------------------------------------------------------
# Second mean value theorem
# ---------------------------------------------------------------------------


def second_mvt_target(f: Distribution, m: Multiplier) -> Fraction | None:
    """The value F(xi) forced by the identity, or None when g is constant."""
    g = m.g.fn
    lo, hi = g.v_neg_inf, g.v_pos_inf
    if lo == hi:
        return None
    s = -1 if f.order % 2 == 0 else 1
    return (hi * f.F.v_pos_inf - s * integrate(f, m)) / (hi - lo)


def second_mvt_rhs(f: Distribution, m: Multiplier, xi_value) -> Fraction:
    """(-1)^(n-1) [g(-inf) F(xi) + g(inf) (F(inf) - F(xi))] for a given F(xi)."""
    g = m.g.fn
    s = -1 if f.order % 2 == 0 else 1
    Fi = f.F.v_pos_inf
    return s * (g.v_neg_inf * xi_value + g.v_pos_inf * (Fi - xi_value))


def second_mvt_xi(f: Distribution, m: Multiplier, tol=DEFAULT_TOL) -> tuple:
    """Enclosure (lo, hi) of the leftmost xi in the extended line satisfying the identity.

    Endpoints are ExtReal. Constant g makes every xi work; 0 is returned.
    """
    tol = as_rational(tol)
    if not f.is_continuous:
        raise NotContinuousPrimitive("the mean value theorem needs a continuous primitive")
    if m.order != f.order - 1:
        raise OrderMismatch("multiplier order must be one less than the distribution order")
    g = m.g.fn
    v_lo, _ = m.g.variation(tol)
    if v_lo > abs(g.v_pos_inf - g.v_neg_inf):
        raise NotMonotone("g is not monotone")
    target = second_mvt_target(f, m)
    if target is None:
        zero_pt = ExtReal.of(0)
        return zero_pt, zero_pt
    F = f.F
    if target == 0:
        return NEG_INF, NEG_INF
    for lo, hi, p in cells(F):
        if lo.is_finite and evaluate(F, lo) == target:
            return lo, lo
        d = p - Poly.const(target)
        if not d or not (lo.is_finite and hi.is_finite):
            continue
        roots = isolate_roots(d, lo.value, hi.value)
        if roots:
            iv = roots[0].refine(tol)
            return ExtReal.of(iv.lo), ExtReal.of(iv.hi)
    if F.v_pos_inf == target:
        return POS_INF, POS_INF
    raise NotMonotone("no admissible xi; the identity has no solution for this pair")


# ---------------------------------------------------------------------------
# Compactly supported multipliers
# ---------------------------------------------------------------------------


def _rising(z: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= z + j
    return out


def compact_bump_g(a, b, p: int, q: int, n: int) -> PiecewiseFn:
    """The (n-1)-th derivative of (x-a)^p (x-b)^q on (a, b), zero elsewhere (Leibniz rule)."""
    a, b = as_rational(a), as_rational(b)
    xa, xb = Poly((-a, 1)), Poly((-b, 1))
    body = ZERO_POLY
    for i in range(n):
        c = comb(n - 1, i) * _rising(p - i + 1, i) * _rising(q - n + i + 2, n - i - 1)
        body = body + (xa ** (p - i)) * (xb ** (q - n + i + 1)) * c
    return PiecewiseFn((a, b), (ZERO_POLY, body, ZERO_POLY), (0, 0))


def build_compact_multiplier(a, b, p: int, q: int, n: int, lam=0) -> tuple:
    """(Multiplier of order n - 1, P) with h + P = I^(n-1)[g] for h = (x-a)^p (x-b)^q on [a, b].

    Here the Multiplier holds I^(n-1)[g], i.e. the bump plus P, and P has
    degree at most n - 2.
    """
    a, b = as_rational(a), as_rational(b)
    if not a < b:
        raise ValueError("need a < b")
    if p < n - 1 or q < n - 1:
        raise ExponentTooSmall(f"exponents must be at least {n - 1}")
    g = compact_bump_g(a, b, p, q, n)
    if p > n - 1 and q > n - 1:
        assert is_smooth(g, 0), "g should be continuous when p, q > n - 1"
    # order 0 keeps the raw open indicator; higher orders give continuous h
    m = Multiplier(0, BVFunction(g)) if n == 1 else Multiplier.from_g(g, n - 1, lam)
    bump = (Poly((-a, 1)) ** p) * (Poly((-b, 1)) ** q)
    h = PiecewiseFn((a, b), (ZERO_POLY, bump, ZERO_POLY), (0, 0))
    diff = m.h - h
    if diff.breakpoints or diff.pieces[0].degree > max(n - 2, -1):
        raise AssertionError("bump and iterated integral differ by more than a low-degree polynomial")
    return m, diff.pieces[0]


# ---------------------------------------------------------------------------
# Dual norm lower bound
# ---------------------------------------------------------------------------


def _dual_family(centres, lam):
    """Admissible g: sup |g| <= 1 and total variation <= 1."""
    one = Poly.const(1)
    for c in centres:
        yield normalize(PiecewiseFn((c,), (ZERO_POLY, one), (0,)), lam)
        yield normalize(PiecewiseFn((c,), (one, ZERO_POLY), (0,)), lam)
        yield clamped_ramp(c, c + 1)
        yield clamped_ramp(c - 1, c) * -1 + PiecewiseFn.constant(1)
    for u, v in zip(centres, centres[1:]):
        yield normalize(indicator(u, v) * Fraction(1, 2), lam)


def dual_norm_estimate(f: Distribution, samples: int = 16, lam=0) -> Fraction:
    """A lower bound for the dual norm sup |integral of f h| over sup|g| <= 1, Vg <= 1.

    The supremum runs over a fixed family: half-line indicators of both
    orientations, ramps of height 1 and half-height interval indicators,
    centred at the primitive's breakpoints and at ``samples`` grid points.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    F = f.F
    bps = list(F.breakpoints)
    lo = (bps[0] if bps else _ZERO) - 1
    hi = (bps[-1] if bps else _ZERO) + 1
    grid = [lo + (hi - lo) * Fraction(i, samples) for i in range(samples + 1)]
    centres = sorted(set(bps) | set(grid))
    best = _ZERO
    n = f.order
    for g in _dual_family(centres, lam):
        g = normalize(g, lam)
        m = Multiplier(n - 1, BVFunction(g, lam))
        best = max(best, abs(integrate(f, m, lam)))
    return best

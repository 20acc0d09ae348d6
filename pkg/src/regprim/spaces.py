"""Validated function spaces and the iterated integration operator.

Wrappers here carry a :class:`~regprim.piecewise.PiecewiseFn` together with
the membership facts that were checked when the wrapper was built, so the
rest of the library can rely on them without re-checking.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial

from .errors import (
    NotInIBVn,
    NotLeftContinuous,
    NotNormalized,
    NotVanishingAtNegInf,
    UnboundedAtInfinity,
)
from .numeric_core import Poly, as_rational
from .piecewise import (
    PiecewiseFn,
    TailClass,
    integrate_from,
    is_smooth,
    jumps,
    normalize,
    piece_at,
    sup_norm,
    variation,
)

DEFAULT_TOL = Fraction(1, 10**9)


class Continuity(enum.Enum):
    CONTINUOUS = "Bc"
    LEFT_CONTINUOUS = "Br"


@dataclass(frozen=True)
class RegulatedPrimitive:
    """Left-continuous regulated function vanishing at -inf, with constant tails."""

    fn: PiecewiseFn
    continuity: Continuity

    @property
    def is_continuous(self) -> bool:
        return self.continuity is Continuity.CONTINUOUS


def validate_Br(fn: PiecewiseFn) -> RegulatedPrimitive:
    """Check membership of the left-continuous class and report the strongest class that holds."""
    if not fn.is_constant_tails:
        raise UnboundedAtInfinity("a primitive needs constant tails")
    if fn.v_neg_inf != 0:
        raise NotVanishingAtNegInf(f"value at -inf is {fn.v_neg_inf}")
    continuous = True
    for b, left, v, right in jumps(fn):
        if v != left:
            raise NotLeftContinuous(f"value {v} at {b} differs from the left limit {left}")
        if right != left:
            continuous = False
    kind = Continuity.CONTINUOUS if continuous else Continuity.LEFT_CONTINUOUS
    return RegulatedPrimitive(fn, kind)


@dataclass(frozen=True)
class BVFunction:
    """A piecewise function of bounded variation, optionally lam-normalized.

    Piecewise polynomials with constant tails always have finite variation,
    so the only checks are the tail class and, when ``normalization`` is
    set, that every point value obeys the lam rule.
    """

    fn: PiecewiseFn
    normalization: Fraction | None = None

    def __post_init__(self):
        if not self.fn.is_constant_tails:
            raise UnboundedAtInfinity("a BV function needs constant tails")
        if self.normalization is not None:
            lam = as_rational(self.normalization)
            object.__setattr__(self, "normalization", lam)
            if normalize(self.fn, lam) != self.fn:
                raise NotNormalized(f"point values do not follow the lambda={lam} rule")

    @classmethod
    def normalized(cls, fn: PiecewiseFn, lam) -> BVFunction:
        return cls(normalize(fn, lam), lam)

    @cached_property
    def cached_variation(self) -> tuple:
        return variation(self.fn, DEFAULT_TOL)

    def variation(self, tol=DEFAULT_TOL) -> tuple:
        return variation(self.fn, tol)

    def bv_norm(self, tol=DEFAULT_TOL) -> tuple:
        """Enclosure of sup|g| + Vg."""
        s_lo, s_hi = sup_norm(self.fn, tol / 2)
        v_lo, v_hi = variation(self.fn, tol / 2)
        return s_lo + v_lo, s_hi + v_hi


def _as_bv(g, lam=None) -> BVFunction:
    if isinstance(g, BVFunction):
        return g
    if lam is None:
        return BVFunction(g)
    return BVFunction.normalized(g, lam)


def iterate_integral(g, n: int) -> PiecewiseFn:
    """The n-fold iterated integral from 0 of g; g itself when n = 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    fn = g.fn if isinstance(g, BVFunction) else g
    if n == 0:
        return fn
    for _ in range(n):
        fn = integrate_from(fn, 0)
    return PiecewiseFn(fn.breakpoints, fn.pieces, fn.point_values, tail_class=TailClass.POLYNOMIAL)


def kernel_integral(g: PiecewiseFn, n: int, x) -> Fraction:
    """(1/(n-1)!) * integral from 0 to x of (x - s)^(n-1) g(s) ds, evaluated exactly."""
    x = as_rational(x)
    if n == 0:
        return g(x)
    kernel = (Poly((x, -1)) ** (n - 1)) * Fraction(1, factorial(n - 1))
    lo, hi, sign = (Fraction(0), x, 1) if x >= 0 else (x, Fraction(0), -1)
    cuts = [lo] + [b for b in g.breakpoints if lo < b < hi] + [hi]
    total = Fraction(0)
    for u, v in zip(cuts, cuts[1:]):
        p = kernel * piece_at(g, u)
        P = p.antideriv()
        total += P(v) - P(u)
    return sign * total


def _taylor_at_zero(h: PiecewiseFn, degree: int) -> Poly:
    """Taylor polynomial of the piece right of 0 (or containing 0)."""
    p = piece_at(h, 0)
    coeffs = []
    d = p
    for k in range(degree + 1):
        coeffs.append(d(Fraction(0)) / factorial(k))
        d = d.deriv()
    return Poly(tuple(coeffs))


def inverse_In(h: PiecewiseFn, n: int, lam) -> BVFunction:
    """The unique NBV_lam function g with I^n[g] = h."""
    if n < 1:
        raise ValueError("inverse_In needs n >= 1")
    lam = as_rational(lam)
    if not is_smooth(h, n - 1):
        raise NotInIBVn(f"h is not C^{n - 1}")
    if _taylor_at_zero(h, n - 1):
        raise NotInIBVn("h or one of its first n-1 derivatives does not vanish at 0")
    pieces = []
    for p in h.pieces:
        pieces.append(p.deriv(n))
    if pieces[0].degree > 0 or pieces[-1].degree > 0:
        raise NotInIBVn("tail pieces of h have degree above n")
    g = PiecewiseFn(
        h.breakpoints,
        tuple(pieces),
        tuple(pieces[i](b) for i, b in enumerate(h.breakpoints)),
    )
    return BVFunction.normalized(g, lam)


@dataclass(frozen=True)
class Multiplier:
    """An element h = I^n[g] of IBV^n, stored with both g and h.

    Order 0 may carry a raw, unnormalized g (lam None): it then pairs with
    first-order distributions through the value of g at every point.
    """

    order: int
    g: BVFunction
    h: PiecewiseFn = field(compare=False, default=None)

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be nonnegative")
        if self.order >= 1 and self.g.normalization is None:
            raise NotNormalized("multipliers of order >= 1 need a normalized g")
        if self.h is None:
            object.__setattr__(self, "h", iterate_integral(self.g, self.order))

    @property
    def lam(self) -> Fraction | None:
        return self.g.normalization

    @classmethod
    def from_g(cls, g, order: int, lam=None) -> Multiplier:
        if isinstance(g, BVFunction):
            if lam is not None and g.normalization != as_rational(lam):
                g = BVFunction.normalized(g.fn, lam)
            return cls(order, g)
        return cls(order, _as_bv(g, lam))

    @classmethod
    def from_h(cls, h: PiecewiseFn, order: int, lam) -> Multiplier:
        if order == 0:
            return cls(0, _as_bv(h, lam))
        return cls(order, inverse_In(h, order, lam), h)


def multiplier_modulo_polynomial(h: PiecewiseFn, n: int, lam) -> tuple:
    """Split h = I^n[g] + P with deg P <= n - 1; returns (Multiplier, P)."""
    if n == 0:
        return Multiplier.from_h(h, 0, lam), Poly(())
    P = _taylor_at_zero(h, n - 1)
    shifted = h - PiecewiseFn.polynomial(P)
    return Multiplier.from_h(shifted, n, lam), P


def ibvn_norm(m: Multiplier, tol=DEFAULT_TOL) -> tuple:
    """Enclosure of sup|g| + Vg for the multiplier's g."""
    return m.g.bv_norm(as_rational(tol))


def essential_variation(g, tol=DEFAULT_TOL) -> tuple:
    fn = g.fn if isinstance(g, BVFunction) else g
    return variation(normalize(fn, 0), as_rational(tol))

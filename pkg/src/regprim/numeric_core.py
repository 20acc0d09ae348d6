"""Exact scalar and univariate polynomial substrate.

Scalars are :class:`fractions.Fraction`. Polynomials are stored lowest degree
first. Real roots are isolated with Sturm sequences and bisection to rational
endpoints; a root is returned as an exact point whenever it is rational, and
only enclosed otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from math import floor, lcm
from typing import Iterable, Union

from .errors import UnboundedPiece, ZeroPolynomial

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_rational(x) -> Fraction:
    """Coerce ints, strings and finite :class:`ExtReal` values to Fraction.

    Floats are refused so that no rounded value can leak into exact data.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, ExtReal):
        if x.is_finite:
            return x.value
        raise ValueError(f"{x} is not finite")
    if isinstance(x, float):
        raise TypeError("floats are not accepted on the exact path")
    raise TypeError(f"cannot interpret {x!r} as a rational")


def sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# Extended reals
# ---------------------------------------------------------------------------


@total_ordering
@dataclass(frozen=True, eq=False)
class ExtReal:
    """A point of the extended real line [-inf, inf].

    ``tag`` is -1 for -inf, +1 for +inf and 0 for a finite rational ``value``.
    """

    tag: int
    value: Fraction = _ZERO

    def __post_init__(self):
        if self.tag not in (-1, 0, 1):
            raise ValueError("tag must be -1, 0 or 1")
        if self.tag:
            object.__setattr__(self, "value", _ZERO)
        else:
            object.__setattr__(self, "value", as_rational(self.value))

    @classmethod
    def of(cls, x) -> ExtReal:
        if isinstance(x, ExtReal):
            return x
        if isinstance(x, str):
            s = x.strip().lower().lstrip("+")
            if s in ("inf", "infinity", "oo"):
                return POS_INF
            if s in ("-inf", "-infinity", "-oo"):
                return NEG_INF
        return cls(0, as_rational(x))

    @property
    def is_finite(self) -> bool:
        return self.tag == 0

    def _key(self):
        return (self.tag, self.value)

    def __eq__(self, other):
        try:
            other = ExtReal.of(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other):
        other = ExtReal.of(other)
        return self._key() < other._key()

    def __hash__(self):
        return hash(self.value) if self.is_finite else hash(("inf", self.tag))

    def __neg__(self):
        return ExtReal(-self.tag, -self.value)

    def __str__(self):
        if self.tag < 0:
            return "-inf"
        if self.tag > 0:
            return "inf"
        return str(self.value)

    def __repr__(self):
        return f"ExtReal({self})"


NEG_INF = ExtReal(-1)
POS_INF = ExtReal(1)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Poly:
    """Univariate polynomial with rational coefficients, lowest degree first.

    Trailing zeros are stripped on construction, so the zero polynomial has
    an empty coefficient tuple and two polynomials are equal exactly when
    their coefficient tuples are.
    """

    coeffs: tuple = ()

    def __post_init__(self):
        c = [as_rational(a) for a in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def const(cls, c: RationalLike) -> Poly:
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c: RationalLike = 1) -> Poly:
        return cls((0,) * k + (c,))

    @classmethod
    def from_roots(cls, roots: Iterable[RationalLike], lead: RationalLike = 1) -> Poly:
        p = cls.const(lead)
        for r in roots:
            p = p * cls((-as_rational(r), 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def __bool__(self):
        return bool(self.coeffs)

    def __call__(self, x) -> Fraction:
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly(tuple(x + y for x, y in zip(a, b)) + a[len(b):])

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Poly):
            if not self.coeffs or not other.coeffs:
                return ZERO_POLY
            out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a:
                    for j, b in enumerate(other.coeffs):
                        out[i + j] += a * b
            return Poly(tuple(out))
        try:
            c = as_rational(other)
        except TypeError:
            return NotImplemented
        return Poly(tuple(a * c for a in self.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        out = ONE_POLY
        for _ in range(k):
            out = out * self
        return out

    def deriv(self, k: int = 1) -> Poly:
        c = list(self.coeffs)
        for _ in range(k):
            c = [i * a for i, a in enumerate(c)][1:]
        return Poly(tuple(c))

    def antideriv(self) -> Poly:
        """Antiderivative vanishing at 0."""
        return Poly((_ZERO,) + tuple(a / (i + 1) for i, a in enumerate(self.coeffs)))

    def compose_affine(self, a, b) -> Poly:
        """The polynomial x -> p(a x + b)."""
        lin = Poly((as_rational(b), as_rational(a)))
        acc = ZERO_POLY
        for c in reversed(self.coeffs):
            acc = acc * lin + c
        return acc

    def taylor(self, c) -> Poly:
        """Coefficients of t -> p(c + t)."""
        return self.compose_affine(1, c)

    def __divmod__(self, other: Poly):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.lead
        quot = [_ZERO] * max(len(rem) - dq, 1)
        while len(rem) - 1 >= dq and rem:
            k = len(rem) - 1 - dq
            c = rem[-1] / lead
            quot[k] = c
            for i, b in enumerate(other.coeffs):
                rem[k + i] -= c * b
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(tuple(quot)), Poly(tuple(rem))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> Poly:
        return self * (1 / self.lead) if self else self

    def float_coeffs(self) -> list:
        return [float(c) for c in self.coeffs]

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{i}")
        return " + ".join(terms)


ZERO_POLY = Poly(())
ONE_POLY = Poly((1,))
X_POLY = Poly((0, 1))


def _as_poly(other):
    if isinstance(other, Poly):
        return other
    try:
        return Poly((as_rational(other),))
    except TypeError:
        return NotImplemented


def poly_eval(p: Poly, x: RationalLike) -> Fraction:
    return p(as_rational(x))


def poly_definite_integral(p: Poly, a: RationalLike, b: RationalLike) -> Fraction:
    """Exact integral of ``p`` from ``a`` to ``b`` (sign flips when a > b)."""
    P = p.antideriv()
    return P(as_rational(b)) - P(as_rational(a))


def poly_gcd(p: Poly, q: Poly) -> Poly:
    while q:
        p, q = q, p % q
    return p.monic()


def squarefree_part(p: Poly) -> Poly:
    """p divided by gcd(p, p'): same distinct roots, all simple."""
    if p.degree <= 0:
        return p.monic()
    g = poly_gcd(p, p.deriv())
    return (p // g).monic()


def sturm_sequence(p: Poly) -> list:
    seq = [p, p.deriv()]
    while seq[-1]:
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def _variations(seq, x) -> int:
    count = 0
    last = 0
    for s in seq:
        v = sign(s(x))
        if v:
            if last and v != last:
                count += 1
            last = v
    return count


def root_bound(p: Poly) -> Fraction:
    """Cauchy bound: every real root satisfies |r| < bound."""
    lead = abs(p.lead)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=_ZERO)


def _integer_leading(p: Poly) -> int:
    """Leading coefficient of the primitive integer multiple of ``p``."""
    den = lcm(*(c.denominator for c in p.coeffs))
    ints = [int(c * den) for c in p.coeffs]
    from math import gcd

    g = 0
    for a in ints:
        g = gcd(g, a)
    return abs(ints[-1] // g)


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with smallest denominator in the closed interval [lo, hi]."""
    if lo > hi:
        lo, hi = hi, lo
    if lo <= 0 <= hi:
        return _ZERO
    if hi < 0:
        return -simplest_between(-hi, -lo)
    # continued-fraction descent; iterative to keep the stack flat
    terms = []
    while True:
        fl = floor(lo)
        if fl == lo:
            value = Fraction(fl)
            break
        if fl + 1 <= hi:
            value = Fraction(fl + 1)
            break
        terms.append(fl)
        lo, hi = 1 / (hi - fl), 1 / (lo - fl)
    for t in reversed(terms):
        value = t + 1 / value
    return value


@dataclass(frozen=True)
class IsolatingInterval:
    """An interval (lo, hi) holding exactly one root of ``poly``.

    ``lo == hi`` marks an exact rational root. ``direction`` is the sign of
    ``poly`` just right of the root (the square-free part always changes
    sign at a root).
    """

    lo: Fraction
    hi: Fraction
    direction: int
    poly: Poly = field(repr=False, compare=False, default=ZERO_POLY)

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def bisect(self) -> IsolatingInterval:
        if self.exact:
            return self
        m = self.midpoint
        v = sign(self.poly(m))
        if v == 0:
            return IsolatingInterval(m, m, self.direction, self.poly)
        if v == self.direction:
            return IsolatingInterval(self.lo, m, self.direction, self.poly)
        return IsolatingInterval(m, self.hi, self.direction, self.poly)

    def refine(self, width: Fraction) -> IsolatingInterval:
        iv = self
        while not iv.exact and iv.width > width:
            iv = iv.bisect()
        return iv

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi


def _certify(q: Poly, u: Fraction, v: Fraction, limit: Fraction) -> IsolatingInterval:
    """Shrink a single-root interval until the root is exact or provably irrational."""
    direction = sign(q(v))
    iv = IsolatingInterval(u, v, direction, q)
    while True:
        s = simplest_between(iv.lo, iv.hi)
        if iv.lo < s < iv.hi and q(s) == 0:
            return IsolatingInterval(s, s, direction, q)
        if iv.width < limit:
            return iv
        iv = iv.bisect()
        if iv.exact:
            return iv


def isolate_roots(p: Poly, a: RationalLike, b: RationalLike) -> list:
    """Isolating intervals for the distinct real roots of ``p`` in the open interval (a, b).

    Rational roots come back as exact points. An interval that is not exact
    is certified to hold an irrational root: it was shrunk below
    1/lead**2 (lead being the leading coefficient of the primitive integer
    form of the square-free part), below which the simplest rational in the
    interval would have to be any rational root present.
    """
    if not p:
        raise ZeroPolynomial("cannot isolate the roots of the zero polynomial")
    a, b = as_rational(a), as_rational(b)
    if a >= b:
        return []
    q = squarefree_part(p)
    if q.degree <= 0:
        return []
    seq = sturm_sequence(q)
    bound = root_bound(q)
    lo = a - 1
    while q(lo) == 0:
        lo -= 1
    hi = b + 1
    while q(hi) == 0:
        hi += 1
    lo = max(lo, -bound - 1)
    hi = min(hi, bound + 1)
    if lo >= hi:
        return []
    lead = _integer_leading(q)
    limit = Fraction(1, lead * lead)

    found = []
    stack = [(lo, hi)]
    while stack:
        u, v = stack.pop()
        k = _variations(seq, u) - _variations(seq, v)
        if k == 0:
            continue
        if k == 1:
            found.append(_certify(q, u, v, limit))
            continue
        m = (u + v) / 2
        if q(m) != 0:
            stack.append((u, m))
            stack.append((m, v))
            continue
        found.append(IsolatingInterval(m, m, sign(q(v)), q))
        e = (v - u) / 4
        while (
            q(m - e) == 0
            or q(m + e) == 0
            or _variations(seq, m - e) - _variations(seq, m + e) != 1
        ):
            e /= 2
        stack.append((u, m - e))
        stack.append((m + e, v))

    inside = []
    for iv in found:
        # an inexact interval holds an irrational root, so it clears a and b
        while not iv.exact and (iv.contains(a) or iv.contains(b)):
            iv = iv.bisect()
        if a < iv.lo and iv.hi < b:
            inside.append(iv)
    inside.sort(key=lambda iv: iv.lo)
    return inside


def value_enclosure(p: Poly, iv: IsolatingInterval) -> tuple:
    """Rational bounds on p(x) for every x in [iv.lo, iv.hi] (Taylor form at the midpoint)."""
    if iv.exact:
        v = p(iv.lo)
        return v, v
    c = iv.midpoint
    r = iv.width / 2
    t = p.taylor(c).coeffs
    centre = t[0] if t else _ZERO
    spread = _ZERO
    rk = _ONE
    for e in t[1:]:
        rk *= r
        spread += abs(e) * rk
    return centre - spread, centre + spread


def _abs_bounds(lo: Fraction, hi: Fraction) -> tuple:
    if lo >= 0:
        return lo, hi
    if hi <= 0:
        return -hi, -lo
    return _ZERO, max(-lo, hi)


def poly_sup_abs(p: Poly, a, b, tol: RationalLike) -> tuple:
    """Certified enclosure (lower, upper) of sup |p| over the closed interval [a, b].

    Exact (lower == upper) when every critical point in (a, b) is rational
    or deg p <= 1; otherwise upper - lower <= tol.
    """
    tol = as_rational(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    a, b = ExtReal.of(a), ExtReal.of(b)
    if p.degree <= 0:
        v = abs(p(_ZERO))
        return v, v
    if not (a.is_finite and b.is_finite):
        raise UnboundedPiece(f"non-constant polynomial {p} on an unbounded interval")
    a, b = a.value, b.value
    if a > b:
        a, b = b, a
    best = max(abs(p(a)), abs(p(b)))
    lower, upper = best, best
    if p.degree >= 2:
        for iv in isolate_roots(p.deriv(), a, b):
            while True:
                lo, hi = _abs_bounds(*value_enclosure(p, iv))
                if hi - lo <= tol:
                    break
                iv = iv.bisect()
            lower = max(lower, lo)
            upper = max(upper, hi)
    return lower, upper

"""Piecewise-polynomial functions on the extended real line.

A :class:`PiecewiseFn` is described by finitely many rational breakpoints,
one polynomial per open cell between them, an explicit value *at* each
breakpoint (independent of both one-sided limits) and, for bounded
functions, the values at -inf and +inf.
"""

from __future__ import annotations

import enum
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateAffine, UnboundedAtInfinity
from .numeric_core import (
    ExtReal,
    IsolatingInterval,
    Poly,
    ZERO_POLY,
    as_rational,
    isolate_roots,
    poly_definite_integral,
    poly_sup_abs,
    root_bound,
    value_enclosure,
)

_ZERO = Fraction(0)


class TailClass(enum.Enum):
    CONSTANT = "ConstantTails"
    POLYNOMIAL = "PolynomialTails"


def _poly(p) -> Poly:
    if isinstance(p, Poly):
        return p
    if isinstance(p, (list, tuple)):
        return Poly(tuple(p))
    return Poly.const(p)


@dataclass(frozen=True)
class PiecewiseFn:
    """Canonical piecewise polynomial.

    Construction prunes every breakpoint whose two neighbouring pieces are
    identical and whose point value equals their common value, so equal
    functions compare equal field by field.
    """

    breakpoints: tuple
    pieces: tuple
    point_values: tuple
    v_neg_inf: Fraction = _ZERO
    v_pos_inf: Fraction = _ZERO
    tail_class: TailClass = TailClass.CONSTANT

    def __post_init__(self):
        bps = [as_rational(b) for b in self.breakpoints]
        pieces = [_poly(p) for p in self.pieces]
        vals = [as_rational(v) for v in self.point_values]
        if len(pieces) != len(bps) + 1 or len(vals) != len(bps):
            raise ValueError("need len(pieces) == len(breakpoints) + 1 == len(point_values) + 1")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        keep_b, keep_p, keep_v = [], [pieces[0]], []
        for b, p, v in zip(bps, pieces[1:], vals):
            if p == keep_p[-1] and v == p(b):
                continue
            keep_b.append(b)
            keep_v.append(v)
            keep_p.append(p)
        tail = TailClass(self.tail_class)
        if tail is TailClass.CONSTANT:
            if keep_p[0].degree > 0 or keep_p[-1].degree > 0:
                raise UnboundedAtInfinity("constant-tail function with a non-constant tail piece")
            lo, hi = keep_p[0](_ZERO), keep_p[-1](_ZERO)
        else:
            lo = hi = _ZERO
        object.__setattr__(self, "breakpoints", tuple(keep_b))
        object.__setattr__(self, "pieces", tuple(keep_p))
        object.__setattr__(self, "point_values", tuple(keep_v))
        object.__setattr__(self, "v_neg_inf", lo)
        object.__setattr__(self, "v_pos_inf", hi)
        object.__setattr__(self, "tail_class", tail)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def build(
        cls,
        breakpoints: Sequence = (),
        pieces: Sequence = (0,),
        point_values: Sequence | None = None,
        tail_class: TailClass | None = None,
    ) -> PiecewiseFn:
        """Convenience constructor.

        Pieces may be given as Poly, coefficient lists or scalars. Missing
        point values default to left limits; the tail class defaults to
        constant tails whenever both tail pieces are constant.
        """
        bps = [as_rational(b) for b in breakpoints]
        ps = [_poly(p) for p in pieces]
        if point_values is None:
            point_values = [ps[i](b) for i, b in enumerate(bps)]
        if tail_class is None:
            const = ps[0].degree <= 0 and ps[-1].degree <= 0
            tail_class = TailClass.CONSTANT if const else TailClass.POLYNOMIAL
        return cls(tuple(bps), tuple(ps), tuple(point_values), tail_class=tail_class)

    @classmethod
    def constant(cls, c=0) -> PiecewiseFn:
        return cls((), (Poly.const(c),), ())

    @classmethod
    def polynomial(cls, p) -> PiecewiseFn:
        p = _poly(p)
        tail = TailClass.CONSTANT if p.degree <= 0 else TailClass.POLYNOMIAL
        return cls((), (p,), (), tail_class=tail)

    @property
    def is_constant_tails(self) -> bool:
        return self.tail_class is TailClass.CONSTANT

    @property
    def max_degree(self) -> int:
        return max(p.degree for p in self.pieces)

    def __call__(self, x):
        return evaluate(self, x)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(-1, other))

    def __neg__(self):
        return scale(-1, self)

    def __mul__(self, other):
        if isinstance(other, PiecewiseFn):
            return multiply(self, other)
        return scale(other, self)

    __rmul__ = __mul__

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "breakpoints": [str(b) for b in self.breakpoints],
            "pieces": [[str(c) for c in p.coeffs] for p in self.pieces],
            "point_values": [str(v) for v in self.point_values],
            "v_neg_inf": str(self.v_neg_inf),
            "v_pos_inf": str(self.v_pos_inf),
            "tail_class": self.tail_class.value,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> PiecewiseFn:
        fn = cls(
            tuple(Fraction(b) for b in doc["breakpoints"]),
            tuple(Poly(tuple(Fraction(c) for c in p)) for p in doc["pieces"]),
            tuple(Fraction(v) for v in doc["point_values"]),
            tail_class=TailClass(doc.get("tail_class", "ConstantTails")),
        )
        for key in ("v_neg_inf", "v_pos_inf"):
            if key in doc and fn.is_constant_tails and Fraction(doc[key]) != getattr(fn, key):
                raise ValueError(f"{key} disagrees with the tail piece")
        return fn


# ---------------------------------------------------------------------------
# Standard functions
# ---------------------------------------------------------------------------


def heaviside(lam=0, at=0) -> PiecewiseFn:
    """H_lam shifted to ``at``: 0 left of the step, 1 right of it, lam at it."""
    return PiecewiseFn((at,), (ZERO_POLY, Poly.const(1)), (lam,))


def indicator(a, b, left_closed: bool = False, right_closed: bool = False) -> PiecewiseFn:
    one = Poly.const(1)
    return PiecewiseFn(
        (a, b), (ZERO_POLY, one, ZERO_POLY), (int(left_closed), int(right_closed))
    )


def point_indicator(at=0, value=1) -> PiecewiseFn:
    """value times the indicator of the single point ``at``."""
    return PiecewiseFn((at,), (ZERO_POLY, ZERO_POLY), (value,))


def clamped_ramp(a=0, b=1) -> PiecewiseFn:
    """0 left of a, linear on [a, b], 1 right of b."""
    a, b = as_rational(a), as_rational(b)
    slope = 1 / (b - a)
    return PiecewiseFn(
        (a, b), (ZERO_POLY, Poly((-a * slope, slope)), Poly.const(1)), (0, 1)
    )


def hat(center=0, halfwidth=1, height=1) -> PiecewiseFn:
    """Triangle of the given height supported on [center - halfwidth, center + halfwidth]."""
    c, w, h = as_rational(center), as_rational(halfwidth), as_rational(height)
    s = h / w
    up = Poly((s * (w - c), s))
    down = Poly((s * (w + c), -s))
    return PiecewiseFn((c - w, c, c + w), (ZERO_POLY, up, down, ZERO_POLY), (0, h, 0))


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _locate(f: PiecewiseFn, x: Fraction) -> tuple:
    """(True, i) if x is breakpoint i, else (False, index of the containing cell)."""
    i = bisect_left(f.breakpoints, x)
    if i < len(f.breakpoints) and f.breakpoints[i] == x:
        return True, i
    return False, i


def piece_at(f: PiecewiseFn, x) -> Poly:
    """The piece governing points just right of x (or containing x)."""
    x = as_rational(x)
    on_bp, i = _locate(f, x)
    return f.pieces[i + 1] if on_bp else f.pieces[i]


def evaluate(f: PiecewiseFn, x) -> Fraction:
    x = ExtReal.of(x)
    if not x.is_finite:
        if not f.is_constant_tails:
            raise UnboundedAtInfinity("polynomial-tail function has no value at infinity")
        return f.v_pos_inf if x.tag > 0 else f.v_neg_inf
    on_bp, i = _locate(f, x.value)
    if on_bp:
        return f.point_values[i]
    return f.pieces[i](x.value)


def limit_left(f: PiecewiseFn, x) -> Fraction:
    x = ExtReal.of(x)
    if not x.is_finite:
        return evaluate(f, x)
    i = bisect_left(f.breakpoints, x.value)
    return f.pieces[i](x.value)


def limit_right(f: PiecewiseFn, x) -> Fraction:
    x = ExtReal.of(x)
    if not x.is_finite:
        return evaluate(f, x)
    on_bp, i = _locate(f, x.value)
    return f.pieces[i + 1 if on_bp else i](x.value)


def jumps(f: PiecewiseFn) -> list:
    """(breakpoint, left limit, point value, right limit) for every breakpoint."""
    return [
        (b, f.pieces[i](b), v, f.pieces[i + 1](b))
        for i, (b, v) in enumerate(zip(f.breakpoints, f.point_values))
    ]


def _replace(f: PiecewiseFn, **changes) -> PiecewiseFn:
    fields = dict(
        breakpoints=f.breakpoints,
        pieces=f.pieces,
        point_values=f.point_values,
        tail_class=f.tail_class,
    )
    fields.update(changes)
    return PiecewiseFn(**fields)


def normalize(f: PiecewiseFn, lam) -> PiecewiseFn:
    lam = as_rational(lam)
    if not 0 <= lam <= 1:
        raise ValueError("lambda must lie in [0, 1]")
    vals = tuple((1 - lam) * l + lam * r for _, l, _, r in jumps(f))
    return _replace(f, point_values=vals)


def is_normalized(f: PiecewiseFn, lam) -> bool:
    return normalize(f, lam) == f


# ---------------------------------------------------------------------------
# Norms
# ---------------------------------------------------------------------------


def _require_constant_tails(f: PiecewiseFn):
    if not f.is_constant_tails:
        raise UnboundedAtInfinity("operation needs constant tails")


def cells(f: PiecewiseFn) -> list:
    """(lo, hi, piece) for every open cell, with ExtReal endpoints."""
    ends = [NEG] + [ExtReal.of(b) for b in f.breakpoints] + [POS]
    return [(ends[i], ends[i + 1], p) for i, p in enumerate(f.pieces)]


NEG = ExtReal(-1)
POS = ExtReal(1)


def sup_norm(f: PiecewiseFn, tol=Fraction(1, 10**9)) -> tuple:
    """Certified enclosure of sup |f| over the real line, point values included."""
    _require_constant_tails(f)
    tol = as_rational(tol)
    lower = upper = max((abs(v) for v in f.point_values), default=_ZERO)
    for lo, hi, p in cells(f):
        l, u = poly_sup_abs(p, lo, hi, tol)
        lower, upper = max(lower, l), max(upper, u)
    return lower, upper


def _abs_interval(lo: Fraction, hi: Fraction) -> tuple:
    if lo >= 0:
        return lo, hi
    if hi <= 0:
        return -hi, -lo
    return _ZERO, max(-lo, hi)


def _piece_variation_nodes(p: Poly, a: Fraction, b: Fraction) -> list:
    """Monotonicity nodes of p on [a, b]: endpoints plus isolated critical points."""
    nodes = [IsolatingInterval(a, a, 0, p)]
    if p.degree >= 2:
        nodes.extend(isolate_roots(p.deriv(), a, b))
    nodes.append(IsolatingInterval(b, b, 0, p))
    return nodes


def variation(g: PiecewiseFn, tol=Fraction(1, 10**9)) -> tuple:
    """Certified enclosure of the total variation over the extended real line.

    Every piece contributes the sum of |p(t_{j+1}) - p(t_j)| over its
    monotonicity nodes; every breakpoint contributes the jumps into and out
    of its point value. Irrational critical points are refined until the
    total enclosure is narrower than ``tol``.
    """
    _require_constant_tails(g)
    tol = as_rational(tol)
    exact = sum((abs(v - l) + abs(r - v) for _, l, v, r in jumps(g)), _ZERO)
    groups = []
    for lo, hi, p in cells(g):
        if p.degree <= 0:
            continue
        groups.append((p, _piece_variation_nodes(p, lo.value, hi.value)))
    while True:
        lower = upper = exact
        for p, nodes in groups:
            encl = [value_enclosure(p, n) for n in nodes]
            for (l0, h0), (l1, h1) in zip(encl, encl[1:]):
                l, u = _abs_interval(l1 - h0, h1 - l0)
                lower += l
                upper += u
        if upper - lower <= tol:
            return lower, upper
        groups = [
            (p, [n if n.exact else n.bisect() for n in nodes]) for p, nodes in groups
        ]


# ---------------------------------------------------------------------------
# Arithmetic on a common refinement
# ---------------------------------------------------------------------------


def _cell_pieces(f: PiecewiseFn, bps: Sequence) -> list:
    """Pieces of f on each cell of a refinement ``bps`` of its breakpoints."""
    out = []
    for i in range(len(bps) + 1):
        if i == 0:
            x = bps[0] - 1 if bps else _ZERO
        elif i == len(bps):
            x = bps[-1] + 1
        else:
            x = (bps[i - 1] + bps[i]) / 2
        out.append(f.pieces[bisect_left(f.breakpoints, x)])
    return out


def union_breakpoints(*fs: PiecewiseFn) -> list:
    return sorted(set().union(*(f.breakpoints for f in fs)))


def _combine(op, f1: PiecewiseFn, f2: PiecewiseFn) -> PiecewiseFn:
    bps = union_breakpoints(f1, f2)
    p1, p2 = _cell_pieces(f1, bps), _cell_pieces(f2, bps)
    pieces = tuple(op(a, b) for a, b in zip(p1, p2))
    vals = tuple(op(evaluate(f1, b), evaluate(f2, b)) for b in bps)
    both = f1.is_constant_tails and f2.is_constant_tails
    tail = TailClass.CONSTANT if both else TailClass.POLYNOMIAL
    return PiecewiseFn(tuple(bps), pieces, vals, tail_class=tail)


def add(f1: PiecewiseFn, f2: PiecewiseFn) -> PiecewiseFn:
    return _combine(lambda a, b: a + b, f1, f2)


def multiply(f1: PiecewiseFn, f2: PiecewiseFn) -> PiecewiseFn:
    return _combine(lambda a, b: a * b, f1, f2)


def scale(c, f: PiecewiseFn) -> PiecewiseFn:
    c = as_rational(c)
    return _replace(
        f,
        pieces=tuple(p * c for p in f.pieces),
        point_values=tuple(v * c for v in f.point_values),
    )


def shift(f: PiecewiseFn, t) -> PiecewiseFn:
    """x -> f(x - t)."""
    return compose_affine(f, 1, -as_rational(t))


def compose_affine(f: PiecewiseFn, a, b) -> PiecewiseFn:
    """x -> f(a x + b)."""
    a, b = as_rational(a), as_rational(b)
    if a == 0:
        raise DegenerateAffine("affine map with zero slope")
    bps = [(c - b) / a for c in f.breakpoints]
    pieces = [p.compose_affine(a, b) for p in f.pieces]
    vals = list(f.point_values)
    if a < 0:
        bps.reverse()
        pieces.reverse()
        vals.reverse()
    return PiecewiseFn(tuple(bps), tuple(pieces), tuple(vals), tail_class=f.tail_class)


# ---------------------------------------------------------------------------
# Pointwise max / min
# ---------------------------------------------------------------------------


def _window(lo: ExtReal, hi: ExtReal, d: Poly) -> tuple:
    """Finite stand-ins for infinite cell ends that enclose every root of d."""
    pad = root_bound(d) + 1
    if lo.is_finite:
        a = lo.value
    else:
        a = min(-pad, hi.value - 1) if hi.is_finite else -pad
    if hi.is_finite:
        b = hi.value
    else:
        b = max(pad, lo.value + 1) if lo.is_finite else pad
    return a, b


def _extremum(f1: PiecewiseFn, f2: PiecewiseFn, take_max: bool, tol) -> tuple:
    tol = as_rational(tol)
    better = (lambda u, v: u >= v) if take_max else (lambda u, v: u <= v)
    bps = union_breakpoints(f1, f2)
    p1, p2 = _cell_pieces(f1, bps), _cell_pieces(f2, bps)
    ends = [NEG] + [ExtReal.of(b) for b in bps] + [POS]
    exact = True
    new_bps, new_pieces, new_vals = [], [], []
    for i, (a, b) in enumerate(zip(p1, p2)):
        lo, hi = ends[i], ends[i + 1]
        d = a - b
        crossings = []
        if d.degree > 0:
            wa, wb = _window(lo, hi, d)
            for iv in isolate_roots(d, wa, wb):
                if iv.exact:
                    crossings.append(iv.lo)
                else:
                    exact = False
                    crossings.append(iv.refine(tol).midpoint)
        # sample each sub-cell to decide which side wins
        marks = [lo] + [ExtReal.of(c) for c in crossings] + [hi]
        for j in range(len(marks) - 1):
            u, v = marks[j], marks[j + 1]
            if u.is_finite and v.is_finite:
                x = (u.value + v.value) / 2
            elif u.is_finite:
                x = u.value + 1
            elif v.is_finite:
                x = v.value - 1
            else:
                x = _ZERO
            piece = a if better(a(x), b(x)) else b
            if j > 0:
                c = crossings[j - 1]
                new_bps.append(c)
                # left limit keeps the result left-continuous at tol-placed crossings
                new_vals.append(new_pieces[-1](c))
            new_pieces.append(piece)
        if i < len(bps):
            v1, v2 = evaluate(f1, bps[i]), evaluate(f2, bps[i])
            new_bps.append(bps[i])
            new_vals.append(v1 if better(v1, v2) else v2)
    both = f1.is_constant_tails and f2.is_constant_tails
    tail = TailClass.CONSTANT if both else TailClass.POLYNOMIAL
    return PiecewiseFn(tuple(new_bps), tuple(new_pieces), tuple(new_vals), tail_class=tail), exact


def pointwise_max(f1: PiecewiseFn, f2: PiecewiseFn, tol=Fraction(1, 10**12)) -> tuple:
    """(max(f1, f2), exact). Crossings at irrational points are placed within tol."""
    return _extremum(f1, f2, True, tol)


def pointwise_min(f1: PiecewiseFn, f2: PiecewiseFn, tol=Fraction(1, 10**12)) -> tuple:
    return _extremum(f1, f2, False, tol)


# ---------------------------------------------------------------------------
# Calculus
# ---------------------------------------------------------------------------


def is_smooth(f: PiecewiseFn, k: int) -> bool:
    """True when f is continuous with continuous derivatives up to order k."""
    if k < 0:
        return True
    for i, (b, v) in enumerate(zip(f.breakpoints, f.point_values)):
        left, right = f.pieces[i], f.pieces[i + 1]
        if v != left(b):
            return False
        for _ in range(k + 1):
            if left(b) != right(b):
                return False
            left, right = left.deriv(), right.deriv()
    return True


def differentiate(f: PiecewiseFn, lam=0) -> PiecewiseFn:
    """Piecewise derivative with point values set by the lam rule."""
    pieces = tuple(p.deriv() for p in f.pieces)
    d = PiecewiseFn(
        f.breakpoints,
        pieces,
        tuple(pieces[i](b) for i, b in enumerate(f.breakpoints)),
        tail_class=TailClass.CONSTANT
        if pieces[0].degree <= 0 and pieces[-1].degree <= 0
        else TailClass.POLYNOMIAL,
    )
    return normalize(d, lam)


def integrate_from(f: PiecewiseFn, anchor="-inf") -> PiecewiseFn:
    """Continuous antiderivative x -> integral of f from ``anchor`` to x.

    ``anchor`` is a rational or "-inf"; the latter needs a zero left tail.
    Point values of f are irrelevant. The tail class of the result is
    constant exactly when both resulting tail pieces are constant.
    """
    anchor = ExtReal.of(anchor)
    bps = f.breakpoints
    prims = [p.antideriv() for p in f.pieces]
    n = len(prims)
    if anchor.is_finite:
        on_bp, j = _locate(f, anchor.value)
        x0 = anchor.value
        if on_bp:
            prims[j] = prims[j] - prims[j](x0)
            prims[j + 1] = prims[j + 1] - prims[j + 1](x0)
            left_start, right_start = j, j + 1
        else:
            prims[j] = prims[j] - prims[j](x0)
            left_start = right_start = j
    elif anchor.tag < 0:
        if f.pieces[0]:
            raise UnboundedAtInfinity("antiderivative from -inf needs a zero left tail")
        prims[0] = ZERO_POLY
        left_start, right_start = 0, 0
    else:
        raise ValueError("anchor must be finite or -inf")
    for i in range(right_start + 1, n):
        b = bps[i - 1]
        prims[i] = prims[i] + (prims[i - 1](b) - prims[i](b))
    for i in range(left_start - 1, -1, -1):
        b = bps[i]
        prims[i] = prims[i] + (prims[i + 1](b) - prims[i](b))
    vals = tuple(prims[i](b) for i, b in enumerate(bps))
    const = prims[0].degree <= 0 and prims[-1].degree <= 0
    tail = TailClass.CONSTANT if const else TailClass.POLYNOMIAL
    return PiecewiseFn(bps, tuple(prims), vals, tail_class=tail)


def integral_over(f: PiecewiseFn, a, b) -> Fraction:
    """Exact integral of f over a finite interval [a, b]."""
    a, b = as_rational(a), as_rational(b)
    sign = 1
    if a > b:
        a, b, sign = b, a, -1
    total = _ZERO
    for lo, hi, p in cells(f):
        u = max(lo, ExtReal.of(a))
        v = min(hi, ExtReal.of(b))
        if u < v:
            total += poly_definite_integral(p, u.value, v.value)
    return sign * total


def sample_points(f: PiecewiseFn, *others: PiecewiseFn) -> list:
    """Breakpoints, cell midpoints and points beyond the outer breakpoints."""
    bps = union_breakpoints(f, *others)
    if not bps:
        return [Fraction(-1), _ZERO, Fraction(1)]
    pts = [bps[0] - 1] + list(bps) + [bps[-1] + 1]
    pts += [(u + v) / 2 for u, v in zip(bps, bps[1:])]
    return sorted(pts)

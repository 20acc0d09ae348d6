"""Henstock-Stieltjes integrals of piecewise data, plus a gauge-sum oracle.

The exact engine splits each integral into a smooth part (a polynomial
product integrated over every open cell of the common refinement) and a
point part. The point term at a breakpoint c is the integrand's value AT c
times the two-sided jump of the integrator across c, which is what tagged
sums converge to once c is forced to be a tag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import UnboundedAtInfinity
from .numeric_core import poly_definite_integral
from .piecewise import (
    PiecewiseFn,
    _cell_pieces,
    evaluate,
    limit_left,
    limit_right,
    union_breakpoints,
)

_ZERO = Fraction(0)


def _fn(x) -> PiecewiseFn:
    fn = x.fn if hasattr(x, "fn") else x
    if not fn.is_constant_tails:
        raise UnboundedAtInfinity("Stieltjes integrals need constant tails")
    return fn


def _stieltjes(integrand: PiecewiseFn, integrator: PiecewiseFn) -> Fraction:
    bps = union_breakpoints(integrand, integrator)
    fs = _cell_pieces(integrand, bps)
    gs = _cell_pieces(integrator, bps)
    total = _ZERO
    # the tail cells contribute nothing: the integrator is constant there
    for i in range(1, len(bps)):
        total += poly_definite_integral(fs[i] * gs[i].deriv(), bps[i - 1], bps[i])
    for c in bps:
        jump = limit_right(integrator, c) - limit_left(integrator, c)
        if jump:
            total += evaluate(integrand, c) * jump
    return total


def hs_integral(F, g) -> Fraction:
    """Exact integral of F with respect to g over the extended real line."""
    return _stieltjes(_fn(F), _fn(g))


def hs_integral_g_dF(g, F) -> Fraction:
    """Exact integral of g with respect to F over the extended real line."""
    return _stieltjes(_fn(g), _fn(F))


def coincident_jump_sum(F, g) -> Fraction:
    """Sum over breakpoints of (F(c) - F(c+)) * (g(c) - g(c+))."""
    F, g = _fn(F), _fn(g)
    total = _ZERO
    for c in union_breakpoints(F, g):
        total += (evaluate(F, c) - limit_right(F, c)) * (evaluate(g, c) - limit_right(g, c))
    return total


# ---------------------------------------------------------------------------
# Gauge-sum oracle (floating point)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TaggedPartition:
    """Division points from -inf to inf with one tag per subinterval."""

    points: tuple
    tags: tuple

    def __post_init__(self):
        pts, tags = self.points, self.tags
        if pts[0] != -math.inf or pts[-1] != math.inf:
            raise ValueError("a partition of the extended line runs from -inf to inf")
        if len(tags) != len(pts) - 1:
            raise ValueError("need one tag per subinterval")
        if any(a >= b for a, b in zip(pts, pts[1:])):
            raise ValueError("division points must increase")
        if any(not (a <= t <= b) for a, b, t in zip(pts, pts[1:], tags)):
            raise ValueError("tag outside its subinterval")
        if tags[0] != -math.inf or tags[-1] != math.inf:
            raise ValueError("the end subintervals are tagged at -inf and inf")


def _uncompact(t: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return t / (1.0 - np.abs(t))


def _segments(bps, level: int):
    """Division points of each segment between consecutive breakpoints.

    The segment is cut into 2**level equal cells of the compactified
    variable, and the two cells touching the segment ends get an extra
    division point at distance step**2: the gauge has to be much finer at
    a forced tag than elsewhere, otherwise a jump of the integrand costs
    an error of order step.
    """
    ts = [-1.0] + [float(b) / (1.0 + abs(float(b))) for b in bps] + [1.0]
    cells = 2**level
    for i in range(len(ts) - 1):
        grid = np.linspace(ts[i], ts[i + 1], cells + 1)
        eps = (grid[1] - grid[0]) ** 2
        grid = np.concatenate(([grid[0], grid[0] + eps], grid[1:-1], [grid[-1] - eps, grid[-1]]))
        x = _uncompact(grid)
        x[0] = -math.inf if i == 0 else float(bps[i - 1])
        x[-1] = math.inf if i == len(ts) - 2 else float(bps[i])
        yield i, x


def _float_values(fn: PiecewiseFn, bps, i: int, xs: np.ndarray) -> np.ndarray:
    """fn at the interior points of segment i (cell i of the refinement)."""
    piece = _cell_pieces(fn, bps)[i]
    coeffs = [float(c) for c in reversed(piece.coeffs)] or [0.0]
    return np.polyval(coeffs, xs)


def _end_value(fn: PiecewiseFn, bps, i: int) -> float:
    """fn at division point i of the segment ends: -inf, the breakpoints, inf."""
    if i == 0:
        return float(fn.v_neg_inf)
    if i == len(bps) + 1:
        return float(fn.v_pos_inf)
    return float(evaluate(fn, bps[i - 1]))


def gauge_partition(bps, level: int) -> TaggedPartition:
    """The tagged partition behind :func:`gauge_oracle`, for inspection."""
    points, tags = [], []
    for i, x in _segments(bps, level):
        mids = (x[1:-1][:-1] + x[1:-1][1:]) / 2
        seg_tags = [x[0]] + list(mids) + [x[-1]]
        points.extend(x[:-1].tolist())
        tags.extend(seg_tags)
    points.append(math.inf)
    return TaggedPartition(tuple(points), tuple(tags))


def gauge_oracle(F, g, level: int) -> float:
    """Riemann-Stieltjes sum of F dg on a fine tagged partition of the extended line.

    Between consecutive union breakpoints the compactified variable
    x / (1 + |x|) is cut into 2**level equal cells. The cells touching a
    breakpoint (or an infinite end) are tagged there, the rest at their
    midpoints. Summation order is fixed and compensated with fsum.
    """
    if level < 1:
        raise ValueError("level must be at least 1")
    F, g = _fn(F), _fn(g)
    bps = union_breakpoints(F, g)
    terms = []
    for i, x in _segments(bps, level):
        inner = x[1:-1]
        g_vals = np.concatenate(
            ([_end_value(g, bps, i)], _float_values(g, bps, i, inner), [_end_value(g, bps, i + 1)])
        )
        mids = (inner[:-1] + inner[1:]) / 2
        F_tags = np.concatenate(
            ([_end_value(F, bps, i)], _float_values(F, bps, i, mids), [_end_value(F, bps, i + 1)])
        )
        terms.extend((F_tags * np.diff(g_vals)).tolist())
    return math.fsum(terms)


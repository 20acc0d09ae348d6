"""Floating-point checks for functions outside the exact engine.

Nothing computed here flows back into exact data. Quadrature is delegated
to :func:`scipy.integrate.quad`; sup norms use a grid scan followed by a
bounded scalar optimisation around the best grid points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import integrate as sp_integrate
from scipy import optimize

from .errors import NoConvergence
from .piecewise import PiecewiseFn, evaluate

DECAY_CLASSES = ("compact", "gaussian", "none")


@dataclass(frozen=True)
class NumericFn:
    """A real function handle with a declared decay class.

    ``support`` is required for the compact class; ``breakpoints`` are
    passed to the quadrature as points needing care.
    """

    evaluator: Callable[[float], float]
    decay: str = "none"
    support: tuple | None = None
    breakpoints: tuple = field(default=())

    def __post_init__(self):
        if self.decay not in DECAY_CLASSES:
            raise ValueError(f"decay must be one of {DECAY_CLASSES}")
        if self.decay == "compact" and self.support is None:
            raise ValueError("compact decay needs a support window")

    def __call__(self, x: float) -> float:
        return float(self.evaluator(x))


def from_piecewise(fn: PiecewiseFn) -> NumericFn:
    """Wrap an exact piecewise function; evaluation rounds the exact value."""

    def ev(x: float) -> float:
        return float(evaluate(fn, Fraction(x)))

    bps = tuple(float(b) for b in fn.breakpoints)
    zero_tails = fn.is_constant_tails and fn.v_neg_inf == 0 and fn.v_pos_inf == 0
    if zero_tails and bps:
        return NumericFn(ev, "compact", (bps[0], bps[-1]), bps)
    return NumericFn(ev, "none", None, bps)


def gaussian_cutoff(tol: float) -> float:
    """Smallest c on a coarse ladder with exp(-c^2)/c < tol/10."""
    c = 1.0
    while math.exp(-c * c) / c >= tol / 10:
        c += 0.25
    return c


def numeric_integral(F: NumericFn, a: float, b: float, tol: float = 1e-8) -> float:
    """Integral of F over [a, b]; infinite ends are truncated by decay class."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0
    if F.decay == "gaussian":
        c = gaussian_cutoff(tol)
        a, b = max(a, -c), min(b, c)
    elif F.decay == "compact":
        lo, hi = F.support
        a, b = max(a, lo), min(b, hi)
    if a >= b:
        return 0.0
    if math.isinf(a) or math.isinf(b):
        value, err = sp_integrate.quad(F, a, b, epsabs=tol / 10, epsrel=0, limit=400)
    else:
        pts = [p for p in F.breakpoints if a < p < b] or None
        value, err = sp_integrate.quad(F, a, b, epsabs=tol / 10, epsrel=0, limit=400, points=pts)
    if not math.isfinite(value) or err > tol:
        raise NoConvergence(f"quadrature error estimate {err:g} exceeds {tol:g}")
    return sign * value


def numeric_sup_norm(
    F: NumericFn, window: tuple, grid: int = 2001, refinement: int = 5
) -> float:
    """sup |F| over a finite window assumed to contain the supremum.

    The best ``refinement`` grid points are polished with a bounded scalar
    minimiser on their neighbouring grid cells. Window ends count too.
    """
    a, b = window
    if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
        raise ValueError("window must be a finite nonempty interval")
    xs = np.linspace(a, b, grid)
    vals = np.array([abs(F(x)) for x in xs])
    best = float(vals.max())
    step = xs[1] - xs[0]
    for i in np.argsort(vals)[::-1][:refinement]:
        lo, hi = max(a, xs[i] - step), min(b, xs[i] + step)
        res = optimize.minimize_scalar(
            lambda x: -abs(F(x)), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}
        )
        best = max(best, -float(res.fun))
    return best

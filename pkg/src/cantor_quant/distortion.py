"""Squared-error distortion of a finite codebook under the Cantor measure.

The integral is evaluated by descending the cylinder tree.  A cylinder that
sits inside a single Voronoi cell contributes its closed-form second moment
about the owning codepoint; a cylinder crossed by a Voronoi boundary is split.
When splitting stops, the crossed cylinder is bounded by the extreme squared
distances to the nearest codepoint over the cylinder interval, which keeps
``[lower, upper]`` a rigorous enclosure of the exact value.
"""

from __future__ import annotations

import math
import sys
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyQuantizer
from .measure import DEFAULT_DEPTH_CAP, check_disjoint, check_ratio, second_moment_about, variance
from .quantizers import Quantizer

DEFAULT_TOL = 1e-12

# slack for rounding in the summed closed-form terms
_ROUNDING = 16 * sys.float_info.epsilon


@dataclass(frozen=True)
class DistortionResult:
    lower: float
    upper: float
    value: float
    resolved_depth: int
    unresolved_mass: float

    @property
    def width(self) -> float:
        return self.upper - self.lower


def as_points(codebook: Quantizer | Sequence[float]) -> list[float]:
    if isinstance(codebook, Quantizer):
        pts = list(codebook.points)
    else:
        pts = sorted(float(p) for p in codebook)
    if not pts:
        raise EmptyQuantizer("codebook has no points")
    return pts


def voronoi_boundaries(codebook: Quantizer | Sequence[float]) -> list[float]:
    """Midpoints between consecutive codepoints (n - 1 of them)."""
    pts = as_points(codebook)
    return [(a + b) / 2 for a, b in zip(pts, pts[1:])]


def _nearest_distance(pts: list[float], bounds: list[float], x: float) -> float:
    return abs(x - pts[bisect_left(bounds, x)])


def _distance_range(pts, bounds, left, right) -> tuple[float, float]:
    """Min and max over ``[left, right]`` of the distance to the nearest codepoint."""
    ends = (_nearest_distance(pts, bounds, left), _nearest_distance(pts, bounds, right))
    j = bisect_left(pts, left)
    dmin = 0.0 if j < len(pts) and pts[j] <= right else min(ends)
    lo, hi = bisect_right(bounds, left), bisect_left(bounds, right)
    interior = (_nearest_distance(pts, bounds, b) for b in bounds[lo:hi])
    return dmin, max(*ends, *interior)


def distortion(
    r: float,
    codebook: Quantizer | Sequence[float],
    tol: float = DEFAULT_TOL,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> DistortionResult:
    """Enclosure of ``integral min_a (x - a)^2 dP(x)`` for the codebook."""
    r = check_ratio(r)
    if tol <= 0:
        raise ValueError("tol must be positive")
    pts = as_points(codebook)
    bounds = voronoi_boundaries(pts)
    var = variance(r)
    shift = 1.0 - r

    exact: list[float] = []
    low: list[float] = []
    high: list[float] = []
    unresolved: list[float] = []
    deepest = 0
    stack = [(1.0, 0.0, 0)]
    while stack:
        scale, offset, depth = stack.pop()
        deepest = max(deepest, depth)
        left, right = offset, offset + scale
        mass = 0.5**depth
        cell = bisect_left(bounds, right)
        if cell == 0 or bounds[cell - 1] <= left:
            gap = offset + 0.5 * scale - pts[cell]
            exact.append(mass * (scale * scale * var + gap * gap))
            continue
        dmin, dmax = _distance_range(pts, bounds, left, right)
        slack = dmax * dmax - dmin * dmin
        if slack <= tol or depth >= depth_cap:
            low.append(mass * dmin * dmin)
            high.append(mass * dmax * dmax)
            if slack > tol:
                unresolved.append(mass)
            continue
        child = scale * r
        stack.append((child, offset + scale * shift, depth + 1))
        stack.append((child, offset, depth + 1))

    base = math.fsum(exact)
    lower = base + math.fsum(low)
    upper = base + math.fsum(high)
    pad = _ROUNDING * upper
    lower, upper = max(lower - pad, 0.0), upper + pad
    return DistortionResult(lower, upper, 0.5 * (lower + upper), deepest, math.fsum(unresolved))


def distortion_over_union(r: float, words: Sequence[str], x0: float) -> float:
    """``integral over the union of the cylinders of (x - x0)^2 dP``."""
    check_disjoint(r, words)
    return math.fsum(second_moment_about(r, w, x0) for w in words)

"""Centroidal Voronoi tessellation tests for the Cantor measure.

Two routes are provided.  ``check_cvt`` is the general test: it integrates P
over every Voronoi cell and compares each cell centroid with its codepoint.
The ``*_margins`` functions evaluate the specific gap inequalities that decide
whether the gamma family keeps its intended cell structure; a margin is
non-negative exactly when the Voronoi boundary falls inside the gap between
the two named cylinders.

The zero-boundary-mass condition is not tested: P has no atoms and Voronoi
boundaries are finitely many points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .distortion import as_points, voronoi_boundaries
from .errors import InvalidRange
from .measure import apply_word, centroid_of_union, check_ratio, restricted_moments
from .quantizers import Quantizer, build_family, build_gamma, level_index

DEFAULT_CENTROID_TOL = 1e-9
CELL_MOMENT_TOL = 1e-12


@dataclass(frozen=True)
class CellReport:
    point: float
    cell_mass: float
    cell_centroid: float
    residual: float


@dataclass(frozen=True)
class CvtReport:
    is_cvt: bool
    max_centroid_residual: float
    per_point: list[CellReport]
    failing_inequalities: list[str] = field(default_factory=list)
    zero_boundary_mass: bool = True


def check_cvt(r: float, codebook: Quantizer | Sequence[float], tol: float = DEFAULT_CENTROID_TOL) -> CvtReport:
    r = check_ratio(r)
    pts = as_points(codebook)
    edges = [-math.inf, *voronoi_boundaries(pts), math.inf]
    cells: list[CellReport] = []
    failing: list[str] = []
    for i, a in enumerate(pts):
        mom = restricted_moments(r, max(edges[i], 0.0), min(edges[i + 1], 1.0), tol=CELL_MOMENT_TOL)
        if mom.mass <= 0.0:
            cells.append(CellReport(a, 0.0, math.nan, math.inf))
            failing.append(f"empty-cell[{i}]")
            continue
        residual = abs(mom.mean - a)
        cells.append(CellReport(a, mom.mass, mom.mean, residual))
        if residual > tol:
            failing.append(f"centroid[{i}]")
    worst = max(c.residual for c in cells)
    return CvtReport(not failing, worst, cells, failing)


def junction_margins(
    r: float,
    left_words: Sequence[str],
    right_words: Sequence[str],
    gap_left: str,
    gap_right: str,
) -> tuple[float, float]:
    """Position of the midpoint of two union centroids relative to a gap.

    Returns ``(b - S_gap_left(1), S_gap_right(0) - b)`` where ``b`` is the
    midpoint of ``a(left_words)`` and ``a(right_words)``.
    """
    b = 0.5 * (centroid_of_union(r, left_words) + centroid_of_union(r, right_words))
    return b - apply_word(r, gap_left, 1.0), apply_word(r, gap_right, 0.0) - b


def gamma3_margins(r: float) -> tuple[float, float]:
    """Both margins are >= 0 iff the three-point gamma set is a CVT."""
    return junction_margins(r, ("11", "121"), ("122", "211"), "121", "122")


def junction_gamma2_margins(r: float) -> tuple[float, float]:
    """Junction between a scaled three-point set and the two-point set to its right."""
    return junction_margins(r, ("1212", "122"), ("21",), "122", "21")


def junction_gamma4_margins(r: float) -> tuple[float, float]:
    """Junction between a scaled three-point set and the four-point set to its right."""
    return junction_margins(r, ("1212", "122"), ("211",), "122", "211")


class GammaInequalities(NamedTuple):
    junction_gamma2: bool
    junction_gamma4: bool
    gamma3_cvt: bool


def check_gamma_inequalities(r: float) -> GammaInequalities:
    """Strict junction inequalities plus the general CVT test on gamma_3."""
    j2 = min(junction_gamma2_margins(r)) > 0
    j4 = min(junction_gamma4_margins(r)) > 0
    return GammaInequalities(j2, j4, check_cvt(r, build_gamma(r, 3)).is_cvt)


def gamma_cvt_predicted(r: float, n: int) -> bool:
    """CVT verdict for ``build_gamma(r, n)`` from the gap inequalities alone."""
    li = level_index(n)
    if n == 2 or li.regime == "power":
        return True
    gamma3 = min(gamma3_margins(r)) >= 0
    if n == 3:
        return gamma3
    return gamma3 and min(junction_gamma2_margins(r)) > 0 and min(junction_gamma4_margins(r)) > 0


def beta_cvt_upper_bound() -> float:
    """Largest r for which every beta codebook is a CVT: the smaller root of x^2 - 5x + 2."""
    return (5.0 - math.sqrt(17.0)) / 2.0


@dataclass(frozen=True)
class CvtScan:
    samples: list[tuple[float, bool]]
    intervals: list[tuple[float, float]]


def scan_cvt_range(
    r_lo: float,
    r_hi: float,
    steps: int,
    builder: str,
    n: int,
    refine_tol: float = 1e-9,
    centroid_tol: float = DEFAULT_CENTROID_TOL,
    variant: str = "left",
) -> CvtScan:
    """Grid scan of the CVT property over r, with bisection-refined endpoints.

    Each CVT run on the grid is reported as an interval whose endpoints are
    refined to within ``refine_tol``; a refined endpoint is always a value
    at which the test passes.
    """
    if not (0.0 < r_lo < r_hi < 0.5) or steps < 2:
        raise InvalidRange(f"need 0 < r_lo < r_hi < 1/2 and steps >= 2, got ({r_lo}, {r_hi}, {steps})")

    def is_cvt(r: float) -> bool:
        return check_cvt(r, build_family(builder, r, n, variant=variant), centroid_tol).is_cvt

    grid = [r_lo + (r_hi - r_lo) * i / (steps - 1) for i in range(steps)]
    samples = [(r, is_cvt(r)) for r in grid]

    def refine(inside: float, outside: float) -> float:
        for _ in range(200):
            if abs(outside - inside) <= refine_tol:
                break
            mid = 0.5 * (inside + outside)
            if is_cvt(mid):
                inside = mid
            else:
                outside = mid
        return inside

    intervals: list[tuple[float, float]] = []
    start = None
    for i, (r, ok) in enumerate(samples):
        if ok and start is None:
            start = r if i == 0 else refine(r, samples[i - 1][0])
        if start is not None and (not ok or i == len(samples) - 1):
            end = r if ok else refine(samples[i - 1][0], r)
            intervals.append((start, end))
            start = None
    return CvtScan(samples, intervals)

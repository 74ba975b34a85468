"""Critical contraction ratios and the crossing structure of the three-point errors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .cvt import (
    beta_cvt_upper_bound,
    gamma3_margins,
    junction_gamma2_margins,
    junction_gamma4_margins,
    scan_cvt_range,
)
from .distortion import distortion
from .errors import BracketNotFound, MultipleRoots
from .quantizers import build_delta, closed_form_v_beta3, closed_form_v_gamma3

MAX_BISECTIONS = 200
TIE_TOL = 1e-12


@dataclass(frozen=True)
class RootResult:
    root: float
    bracket: tuple[float, float]
    residual: float
    iterations: int


def bisect(f: Callable[[float], float], a: float, b: float, tol: float) -> RootResult:
    """Plain bisection on a sign-changing bracket ``[a, b]``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return RootResult(a, (a, a), 0.0, 0)
    if fb == 0.0:
        return RootResult(b, (b, b), 0.0, 0)
    if (fa > 0) == (fb > 0):
        raise BracketNotFound(f"no sign change on [{a}, {b}]: f = {fa:.3g}, {fb:.3g}")
    it = 0
    while it < MAX_BISECTIONS and b - a > tol:
        it += 1
        mid = 0.5 * (a + b)
        fm = f(mid)
        if fm == 0.0:
            a = b = mid
            break
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    root = 0.5 * (a + b)
    return RootResult(root, (a, b), f(root), it)


def critical_polynomial(r: float) -> float:
    """``6(r-1)(r^4+r^2) - (r^7+r^6+4r^5-2r^4-2r^3-8r^2+9r-3)``.

    Equals ``-48 (r + 1) (V(beta_3) - V(gamma_3))``, so it is positive exactly
    where beta_3 beats gamma_3.
    """
    rhs = r**7 + r**6 + 4 * r**5 - 2 * r**4 - 2 * r**3 - 8 * r**2 + 9 * r - 3
    return 6 * (r - 1) * (r**4 + r**2) - rhs


def solve_r0(tol: float = 1e-12, grid: int = 1000) -> RootResult:
    """Unique root of ``critical_polynomial`` in (0, 1/2).

    A sign scan over ``grid`` interior points must show exactly one change;
    anything else is reported rather than resolved.
    """
    xs = [0.5 * i / grid for i in range(1, grid)]
    signs = [critical_polynomial(x) > 0 for x in xs]
    changes = [i for i in range(len(xs) - 1) if signs[i] != signs[i + 1]]
    if not changes:
        raise BracketNotFound("critical polynomial keeps one sign on (0, 1/2)")
    if len(changes) > 1:
        raise MultipleRoots(f"{len(changes)} sign changes on (0, 1/2) near {[xs[i] for i in changes]}")
    i = changes[0]
    return bisect(critical_polynomial, xs[i], xs[i + 1], tol)


def _gamma3_min_margin(r: float) -> float:
    return min(gamma3_margins(r))


def solve_gamma_cvt_endpoints(tol: float = 1e-12, scan_lo: float = 0.30, scan_hi: float = 0.49) -> tuple[RootResult, RootResult]:
    """Endpoints of the r-range in which the three-point gamma set is a CVT.

    A ``check_cvt`` grid scan locates the range; each endpoint is then solved
    on the gap inequality that becomes an equality there.
    """
    scan = scan_cvt_range(scan_lo, scan_hi, 200, "gamma", 3)
    if len(scan.intervals) != 1:
        raise BracketNotFound(f"expected one CVT interval, found {scan.intervals}")
    start, end = scan.intervals[0]
    step = (scan_hi - scan_lo) / 199
    lower = bisect(_gamma3_min_margin, max(start - step, 1e-9), start, tol)
    upper = bisect(_gamma3_min_margin, end, min(end + step, 0.5 - 1e-9), tol)
    return lower, upper


def solve_junction_bounds(tol: float = 1e-12, lo: float = 0.45, hi: float = 0.4999) -> tuple[RootResult, RootResult]:
    """Largest r for which each gamma junction inequality still holds."""
    j2 = bisect(lambda r: min(junction_gamma2_margins(r)), lo, hi, tol)
    j4 = bisect(lambda r: min(junction_gamma4_margins(r)), lo, hi, tol)
    return j2, j4


def delta_gap(r: float) -> float:
    """Engine distortion of the left delta_3 set minus the closed-form beta_3 error."""
    return distortion(r, build_delta(r, 3, variant="left")).value - closed_form_v_beta3(r)


def solve_delta_crossing(tol: float = 1e-12, lo: float = 0.43, hi: float = 0.44) -> RootResult:
    return bisect(delta_gap, lo, hi, tol)


@dataclass(frozen=True)
class OrderingReport:
    r: float
    v_beta3: float
    v_gamma3: float
    v_delta3: float
    min_label: str
    ties: tuple[str, ...]


def ordering_report(r: float) -> OrderingReport:
    """Three-point errors of the beta, gamma and delta sets at one r.

    ``min_label`` is the first of beta, gamma, delta whose error is within
    ``TIE_TOL`` of the smallest; all such labels are listed in ``ties``.
    """
    values = {
        "beta": closed_form_v_beta3(r),
        "gamma": closed_form_v_gamma3(r),
        "delta": distortion(r, build_delta(r, 3)).value,
    }
    best = min(values.values())
    ties = tuple(k for k, v in values.items() if v - best <= TIE_TOL)
    return OrderingReport(r, values["beta"], values["gamma"], values["delta"], ties[0], ties)


@dataclass(frozen=True)
class CriticalConstants:
    r0: RootResult
    gamma_cvt_lower: RootResult
    gamma_cvt_upper: RootResult
    delta_crossing: RootResult
    beta_cvt_bound: float

    def as_dict(self) -> dict:
        def root(res: RootResult) -> dict:
            return {"value": res.root, "bracket": list(res.bracket), "residual": res.residual, "iterations": res.iterations}

        bound = self.beta_cvt_bound
        return {
            "r0": root(self.r0),
            "gamma_cvt_lower": root(self.gamma_cvt_lower),
            "gamma_cvt_upper": root(self.gamma_cvt_upper),
            "delta_crossing": root(self.delta_crossing),
            "beta_cvt_bound": {"value": bound, "residual": bound * bound - 5 * bound + 2},
        }


def solve_all(tol: float = 1e-12) -> CriticalConstants:
    lower, upper = solve_gamma_cvt_endpoints(tol)
    return CriticalConstants(solve_r0(tol), lower, upper, solve_delta_crossing(tol), beta_cvt_upper_bound())


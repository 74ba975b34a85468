"""Published reference values and the runner that checks them.

Each entry recomputes one quoted decimal from scratch.  Values that depend on
the contraction ratio take it as an argument, so a single entry can be re-run
at a perturbed ratio.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Iterable

from .critical import (
    critical_polynomial,
    solve_delta_crossing,
    solve_gamma_cvt_endpoints,
    solve_junction_bounds,
    solve_r0,
)
from .cvt import beta_cvt_upper_bound
from .distortion import distortion, distortion_over_union
from .measure import apply_word, centroid_of_union, centroid_of_word, second_moment_about, variance
from .quantizers import build_beta, build_gamma, closed_form_v_beta3, closed_form_v_gamma3

R_CRITICAL = 0.4350411707

ANCHOR_TOL = 5e-7
CONSTANT_TOL = 5e-9


@dataclass(frozen=True)
class Anchor:
    name: str
    expected: float
    tol: float
    compute: Callable[[float], float]
    r: float = R_CRITICAL
    group: str = "geometry"


@dataclass(frozen=True)
class AnchorOutcome:
    name: str
    group: str
    expected: float
    computed: float
    tol: float

    @property
    def error(self) -> float:
        return abs(self.computed - self.expected)

    @property
    def passed(self) -> bool:
        return self.error <= self.tol


@lru_cache(maxsize=1)
def _gamma_endpoints():
    return solve_gamma_cvt_endpoints()


@lru_cache(maxsize=1)
def _junction_bounds():
    return solve_junction_bounds()


def _a(r: float, *words: str) -> float:
    return centroid_of_union(r, list(words))


def _cyl(r: float, word: str, x: float) -> float:
    return apply_word(r, word, x)


def _geometry() -> list[Anchor]:
    g = "geometry"
    return [
        Anchor("a(1)", 0.2175, 5e-5, lambda r: centroid_of_word(r, "1"), group=g),
        Anchor("a(2)", 0.7825, 5e-5, lambda r: centroid_of_word(r, "2"), group=g),
        Anchor("S11(1)", 0.189261, ANCHOR_TOL, lambda r: _cyl(r, "11", 1.0), group=g),
        Anchor("S121(1)", 0.328117, ANCHOR_TOL, lambda r: _cyl(r, "121", 1.0), group=g),
        Anchor("S122(0)", 0.352705, ANCHOR_TOL, lambda r: _cyl(r, "122", 0.0), group=g),
        Anchor("S1212(0)", 0.292297, ANCHOR_TOL, lambda r: _cyl(r, "1212", 0.0), group=g),
        Anchor("S1211(1)", 0.2816, ANCHOR_TOL, lambda r: _cyl(r, "1211", 1.0), group=g),
        Anchor("S12122(0)", 0.312534, ANCHOR_TOL, lambda r: _cyl(r, "12122", 0.0), group=g),
        Anchor("S12212(0)", 0.372942, ANCHOR_TOL, lambda r: _cyl(r, "12212", 0.0), group=g),
        Anchor("S12121(1)", 0.30788, 5e-6, lambda r: _cyl(r, "12121", 1.0), group=g),
        Anchor("a(11,121)", 0.158736, ANCHOR_TOL, lambda r: _a(r, "11", "121"), group=g),
        Anchor("a(11,1211,12121)", 0.144047, ANCHOR_TOL, lambda r: _a(r, "11", "1211", "12121"), group=g),
        Anchor("(a(11,1211)+r)/2", 0.281742, ANCHOR_TOL, lambda r: 0.5 * (_a(r, "11", "1211") + r), group=g),
        Anchor(
            "(a(11,1211,12121)+1-r)/2",
            0.354503,
            ANCHOR_TOL,
            lambda r: 0.5 * (_a(r, "11", "1211", "12121") + 1 - r),
            group=g,
        ),
        Anchor("(S11(1)+1/2)/2", 0.344631, 1e-6, lambda r: 0.5 * (_cyl(r, "11", 1.0) + 0.5), group=g),
        Anchor("3r-1", 0.305124, ANCHOR_TOL, lambda r: 3 * r - 1, group=g),
        Anchor("2r-1/2", 0.370082, ANCHOR_TOL, lambda r: 2 * r - 0.5, group=g),
    ]


def _distortions() -> list[Anchor]:
    g = "distortion"
    five = ("11", "12", "21", "221", "222")
    return [
        Anchor("V2 = r^2 V", 0.0186274, ANCHOR_TOL, lambda r: distortion(r, build_beta(r, 2)).value, group=g),
        Anchor("V3", 0.0110764, ANCHOR_TOL, lambda r: distortion(r, build_beta(r, 3)).value, group=g),
        Anchor("V4", 0.00352544, ANCHOR_TOL, lambda r: distortion(r, build_beta(r, 4)).value, group=g),
        Anchor(
            "five-point set",
            0.00281089,
            ANCHOR_TOL,
            lambda r: distortion(r, [centroid_of_word(r, w) for w in five]).value,
            group=g,
        ),
        Anchor("beta_8", 0.000667229, ANCHOR_TOL, lambda r: distortion(r, build_beta(r, 8)).value, group=g),
        Anchor("beta_16 = r^8 V", 0.00012628, ANCHOR_TOL, lambda r: distortion(r, build_beta(r, 16)).value, group=g),
        Anchor("int_J1 (x-a(1))^2", 0.00931372, ANCHOR_TOL, lambda r: second_moment_about(r, "1", centroid_of_word(r, "1")), group=g),
        Anchor("int_J1 (x-r)^2", 0.0329713, ANCHOR_TOL, lambda r: second_moment_about(r, "1", r), group=g),
        Anchor("int_J11 (x-0.20)^2", 0.00365705, ANCHOR_TOL, lambda r: second_moment_about(r, "11", 0.20), group=g),
        Anchor(
            "int_J11 (x-S11(1))^2",
            0.00312009,
            ANCHOR_TOL,
            lambda r: second_moment_about(r, "11", _cyl(r, "11", 1.0)),
            group=g,
        ),
        Anchor(
            "int_J11uJ121 (x-a(11,121))^2",
            0.00404695,
            ANCHOR_TOL,
            lambda r: distortion_over_union(r, ["11", "121"], _a(r, "11", "121")),
            group=g,
        ),
        Anchor(
            "int_J12122uJ122 (x-0.305124)^2",
            0.00107592,
            ANCHOR_TOL,
            lambda r: distortion_over_union(r, ["12122", "122"], 0.305124),
            group=g,
        ),
        Anchor(
            "int_J12212uJ1222 (x-0.3700816)^2",
            0.000150535,
            ANCHOR_TOL,
            lambda r: distortion_over_union(r, ["12212", "1222"], 0.3700816),
            group=g,
        ),
        Anchor(
            "four-means bound, point in (r, 1/2]",
            0.00366173,
            ANCHOR_TOL,
            lambda r: distortion_over_union(r, ["11", "1211"], _a(r, "11", "1211"))
            + second_moment_about(r, "122", r)
            + 0.5 * r * r * closed_form_v_beta3(r),
            group=g,
        ),
        Anchor(
            "four-means bound, one point in J1",
            0.00528016,
            ANCHOR_TOL,
            lambda r: distortion_over_union(r, ["11", "1211", "12121"], _a(r, "11", "1211", "12121"))
            + distortion_over_union(r, ["12122", "122"], 3 * r - 1)
            + 0.5 * r * r * closed_form_v_beta3(r),
            group=g,
        ),
        Anchor(
            "five-means bound, point in [1/2, 1-r)",
            0.00364889,
            ANCHOR_TOL,
            lambda r: second_moment_about(r, "11", centroid_of_word(r, "11"))
            + second_moment_about(r, "121", _cyl(r, "11", 1.0))
            + second_moment_about(r, "122", 0.5),
            group=g,
        ),
        Anchor(
            "five-means bound, point in (r, 1/2]",
            0.00294718,
            ANCHOR_TOL,
            lambda r: distortion_over_union(r, ["11", "1211"], _a(r, "11", "1211"))
            + second_moment_about(r, "122", r)
            + 0.5 * r**6 * variance(r),
            group=g,
        ),
        Anchor(
            "V(beta_3) - V(gamma_3) at r0",
            0.0,
            1e-11,
            lambda r: closed_form_v_beta3(r) - closed_form_v_gamma3(r),
            group=g,
        ),
        Anchor(
            "engine V(gamma_3) at r0",
            0.0110764,
            ANCHOR_TOL,
            lambda r: distortion(r, build_gamma(r, 3)).value,
            group=g,
        ),
    ]


def _constants() -> list[Anchor]:
    g = "constant"
    return [
        Anchor("critical polynomial at r0", 0.0, 1e-8, critical_polynomial, group=g),
        Anchor("r0", 0.4350411707, CONSTANT_TOL, lambda r: solve_r0().root, group=g),
        Anchor("beta CVT bound (5-sqrt 17)/2", 0.4384471872, CONSTANT_TOL, lambda r: beta_cvt_upper_bound(), group=g),
        Anchor("gamma_3 CVT lower endpoint", 0.3613249509, CONSTANT_TOL, lambda r: _gamma_endpoints()[0].root, group=g),
        Anchor("gamma_3 CVT upper endpoint", 0.4376259168, CONSTANT_TOL, lambda r: _gamma_endpoints()[1].root, group=g),
        Anchor("delta crossing", 0.4371985206, 5e-8, lambda r: solve_delta_crossing().root, group=g),
        Anchor("gamma/gamma_2 junction bound", 0.4850084548, CONSTANT_TOL, lambda r: _junction_bounds()[0].root, group=g),
        Anchor("gamma/gamma_4 junction bound", 0.4847126592, CONSTANT_TOL, lambda r: _junction_bounds()[1].root, group=g),
    ]


def reference_anchors() -> list[Anchor]:
    return _geometry() + _distortions() + _constants()


def run_anchors(anchors: Iterable[Anchor] | None = None, perturb: dict[str, float] | None = None) -> list[AnchorOutcome]:
    """Evaluate anchors; ``perturb`` maps anchor names to a shift added to their ratio."""
    perturb = perturb or {}
    outcomes = []
    for anchor in reference_anchors() if anchors is None else anchors:
        if anchor.name in perturb:
            anchor = replace(anchor, r=anchor.r + perturb[anchor.name])
        outcomes.append(AnchorOutcome(anchor.name, anchor.group, anchor.expected, anchor.compute(anchor.r), anchor.tol))
    return outcomes

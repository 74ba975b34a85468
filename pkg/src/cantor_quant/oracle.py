"""Brute-force reference quantizers for the Cantor measure.

``discretize`` replaces every depth-k cylinder by a point mass at its
centroid.  Squared error on a line is minimised by contiguous clusters, so
``dp_optimal`` solves the discretised problem exactly by dynamic programming
over contiguous runs of atoms.  Since each atom sits at the centroid of its
cylinder, adding the within-cylinder variance gives the exact distortion of
the optimal cylinder-aligned partition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .critical import critical_polynomial
from .cvt import check_cvt
from .distortion import as_points, distortion, voronoi_boundaries
from .errors import DepthOutOfRange, EmptyCellEncountered, NTooLarge
from .measure import check_ratio, restricted_moments, variance
from .quantizers import Quantizer, beta_distortion_formula, build_delta, build_gamma

MAX_DEPTH = 22
DEFAULT_DEPTH = 14


@dataclass(frozen=True)
class AtomList:
    r: float
    depth: int
    positions: np.ndarray
    within_atom_variance: float

    @property
    def count(self) -> int:
        return len(self.positions)

    @property
    def mass(self) -> float:
        return 0.5**self.depth


def discretize(r: float, k: int) -> AtomList:
    """Cylinder centroids at depth k, in spatial order."""
    r = check_ratio(r)
    if not 1 <= k <= MAX_DEPTH:
        raise DepthOutOfRange(f"depth must be in [1, {MAX_DEPTH}], got {k}")
    pts = np.array([0.5])
    for _ in range(k):
        # prepending a symbol: S_i(S_w(1/2)); blocks stay in lexicographic order
        pts = np.concatenate([r * pts, r * pts + (1.0 - r)])
    return AtomList(r, k, pts, r ** (2 * k) * variance(r))


@dataclass(frozen=True)
class OracleResult:
    n: int
    value: float
    codepoints: Quantizer
    partition: tuple[int, ...]
    discretization_error_bound: float


class _Costs:
    """Weighted within-cluster squared error of atoms ``j..i-1`` via prefix sums."""

    def __init__(self, atoms: AtomList):
        y = atoms.positions - 0.5
        self.weight = atoms.mass
        self.s1 = np.concatenate([[0.0], np.cumsum(y)])
        self.s2 = np.concatenate([[0.0], np.cumsum(y * y)])

    def __call__(self, j: np.ndarray, i: np.ndarray) -> np.ndarray:
        cnt = i - j
        s1 = self.s1[i] - self.s1[j]
        s2 = self.s2[i] - self.s2[j]
        return np.maximum(s2 - s1 * s1 / cnt, 0.0) * self.weight


def _layer_naive(prev: np.ndarray, c: int, m: int, cost: _Costs) -> tuple[np.ndarray, np.ndarray]:
    cur = np.full(m + 1, np.inf)
    arg = np.zeros(m + 1, dtype=np.int64)
    for i in range(c, m + 1):
        j = np.arange(c - 1, i)
        vals = prev[j] + cost(j, np.full_like(j, i))
        best = int(np.argmin(vals))  # first minimum, i.e. smallest split index
        cur[i] = vals[best]
        arg[i] = j[best]
    return cur, arg


def _layer_dc(prev: np.ndarray, c: int, m: int, cost: _Costs) -> tuple[np.ndarray, np.ndarray]:
    """One DP layer by divide and conquer on the monotone split index.

    The recursion tree is processed one level at a time so that all nodes on
    a level are evaluated in a single vectorised pass.
    """
    cur = np.full(m + 1, np.inf)
    arg = np.zeros(m + 1, dtype=np.int64)
    lo = np.array([c])
    hi = np.array([m])
    opt_lo = np.array([c - 1])
    opt_hi = np.array([m - 1])
    while lo.size:
        mid = (lo + hi) // 2
        cand_hi = np.minimum(mid - 1, opt_hi)
        counts = cand_hi - opt_lo + 1
        starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
        total = int(counts.sum())
        flat = np.arange(total) - np.repeat(starts, counts)
        j = np.repeat(opt_lo, counts) + flat
        i = np.repeat(mid, counts)
        vals = prev[j] + cost(j, i)
        seg_min = np.minimum.reduceat(vals, starts)
        hit = np.where(vals == np.repeat(seg_min, counts), np.arange(total), total)
        best = j[np.minimum.reduceat(hit, starts)]
        cur[mid] = seg_min
        arg[mid] = best

        left = lo <= mid - 1
        right = mid + 1 <= hi
        lo = np.concatenate([lo[left], mid[right] + 1])
        hi = np.concatenate([mid[left] - 1, hi[right]])
        opt_lo, opt_hi = (
            np.concatenate([opt_lo[left], best[right]]),
            np.concatenate([best[left], opt_hi[right]]),
        )
    return cur, arg


def _dp_tables(atoms: AtomList, n: int, method: str) -> tuple[list[np.ndarray], list[np.ndarray]]:
    m = atoms.count
    if not 1 <= n <= m:
        raise NTooLarge(f"n must be in [1, {m}], got {n}")
    if method not in ("dc", "naive"):
        raise ValueError(f"method must be 'dc' or 'naive', got {method!r}")
    cost = _Costs(atoms)
    first = np.full(m + 1, np.inf)
    first[1:] = cost(np.zeros(m, dtype=np.int64), np.arange(1, m + 1))
    layers, args = [first], [np.zeros(m + 1, dtype=np.int64)]
    layer = _layer_dc if method == "dc" else _layer_naive
    for c in range(2, n + 1):
        cur, arg = layer(layers[-1], c, m, cost)
        layers.append(cur)
        args.append(arg)
    return layers, args


def discretization_error_bound(atoms: AtomList, n: int) -> float:
    """Gap between the oracle value and the true n-th quantization error.

    An optimal codebook has at most n - 1 Voronoi boundaries, each crossing
    at most one depth-k cylinder.  Moving such a cylinder wholly to one side
    costs at most ``2 * gap * diameter`` per unit mass, with gap <= 1.
    """
    return 2.0 * (n - 1) * atoms.mass * atoms.r**atoms.depth


def _result(atoms: AtomList, n: int, layers, args) -> OracleResult:
    m = atoms.count
    cuts = [m]
    for c in range(n, 1, -1):
        cuts.append(int(args[c - 1][cuts[-1]]))
    cuts.append(0)
    cuts.reverse()
    pos = atoms.positions
    centres = [float(pos[a:b].mean()) for a, b in zip(cuts, cuts[1:])]
    value = float(layers[n - 1][m]) + atoms.within_atom_variance
    return OracleResult(n, value, Quantizer(tuple(centres)), tuple(cuts), discretization_error_bound(atoms, n))


def dp_optimal(atoms: AtomList, n: int, method: str = "dc") -> OracleResult:
    """Exact optimal n-clustering of the atoms into contiguous runs.

    ``value`` is the distortion of that partition under P (atom SSE plus the
    within-atom variance), hence an upper bound on the n-th quantization
    error that is sharp up to ``discretization_error_bound``.
    ``partition`` lists the cluster boundaries as atom indices ``0 = c0 < ... < cn = m``.
    """
    layers, args = _dp_tables(atoms, n, method)
    return _result(atoms, n, layers, args)


def dp_optimal_all(atoms: AtomList, n_max: int, method: str = "dc") -> list[OracleResult]:
    """``dp_optimal`` for every n in 1..n_max from a single DP run."""
    layers, args = _dp_tables(atoms, n_max, method)
    return [_result(atoms, n, layers, args) for n in range(1, n_max + 1)]


def quantile_init(atoms: AtomList, n: int) -> Quantizer:
    """Median atom of each of n equal-count runs.

    A start that does not depend on any candidate family.  Medians rather than
    run means, since a mean can land in a gap of the support and own no mass.
    """
    m = atoms.count
    if not 1 <= n <= m:
        raise NTooLarge(f"n must be in [1, {m}], got {n}")
    cuts = [(i * m) // n for i in range(n + 1)]
    return Quantizer(tuple(float(atoms.positions[(a + b - 1) // 2]) for a, b in zip(cuts, cuts[1:])))


def lloyd_steps(r: float, init: Quantizer | list[float]) -> Iterator[Quantizer]:
    """Endless Lloyd iteration: each step moves every point to its cell centroid."""
    r = check_ratio(r)
    pts = as_points(init)
    while True:
        edges = [-math.inf, *voronoi_boundaries(pts), math.inf]
        nxt = []
        for i, a in enumerate(pts):
            mom = restricted_moments(r, max(edges[i], 0.0), min(edges[i + 1], 1.0), tol=1e-14)
            if mom.mass <= 0.0:
                raise EmptyCellEncountered(a, i)
            nxt.append(mom.mean)
        pts = nxt
        yield Quantizer(tuple(pts))


def lloyd(r: float, init: Quantizer | list[float], max_iters: int = 500, tol: float = 1e-12) -> Quantizer:
    """Iterate to a centroidal fixed point (movement below ``tol``) or ``max_iters`` steps."""
    prev = Quantizer(tuple(as_points(init)))
    for step, q in enumerate(lloyd_steps(r, prev), start=1):
        moved = max(abs(a - b) for a, b in zip(q.points, prev.points))
        prev = q
        if moved < tol or step >= max_iters:
            break
    return prev


@dataclass(frozen=True)
class Comparison:
    r: float
    n: int
    depth: int
    v_beta: float
    v_gamma: float
    v_delta: float
    oracle: float
    discretization_error_bound: float
    argmin: str
    gamma_is_cvt: bool
    delta_is_cvt: bool
    exploratory: bool

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def compare(r: float, n: int, k: int = DEFAULT_DEPTH, tie_tol: float = 1e-12) -> Comparison:
    """Candidate errors against the oracle at one (r, n).

    ``argmin`` names the best of beta, gamma, delta, preferring the earlier
    label when errors agree to ``tie_tol``.  Rows above the critical ratio are
    flagged ``exploratory``: no optimal value is known there, so the oracle is
    numerical evidence only.
    """
    r = check_ratio(r)
    gamma = build_gamma(r, n)
    delta = build_delta(r, n)
    values = {
        "beta": beta_distortion_formula(r, n),
        "gamma": distortion(r, gamma).value,
        "delta": distortion(r, delta).value,
    }
    best = min(values.values())
    label = next(k_ for k_, v in values.items() if v - best <= tie_tol)
    res = dp_optimal(discretize(r, k), n)
    return Comparison(
        r,
        n,
        k,
        values["beta"],
        values["gamma"],
        values["delta"],
        res.value,
        res.discretization_error_bound,
        label,
        check_cvt(r, gamma).is_cvt,
        check_cvt(r, delta).is_cvt,
        critical_polynomial(r) < 0,
    )

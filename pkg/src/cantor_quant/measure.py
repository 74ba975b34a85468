"""Exact calculus for the uniform Cantor measure.

The measure P is the invariant measure of the two maps ``S1(x) = r*x`` and
``S2(x) = r*x + 1 - r`` with equal weights 1/2.  Cylinders are addressed by
words over the alphabet ``{"1", "2"}``; the empty string is the empty word
and maps to the identity (cylinder ``[0, 1]``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .errors import InvalidRatio, InvalidWord, OverlappingWords

MEAN = 0.5

DEFAULT_DEPTH_CAP = 60
DEFAULT_MOMENT_TOL = 1e-13


def check_ratio(r: float) -> float:
    r = float(r)
    if not 0.0 < r < 0.5:
        raise InvalidRatio(f"contraction ratio must satisfy 0 < r < 1/2, got {r!r}")
    return r


def check_word(word: str) -> str:
    if any(c not in "12" for c in word):
        raise InvalidWord(f"words are strings over '1'/'2', got {word!r}")
    return word


def mirror(word: str) -> str:
    """Swap 1 <-> 2; the cylinder of the mirror word is the reflection x -> 1 - x."""
    return check_word(word).translate(str.maketrans("12", "21"))


def words_of_length(k: int) -> list[str]:
    """All words of length k in lexicographic (= spatial) order."""
    return ["".join(p) for p in product("12", repeat=k)]


def affine_of_word(r: float, word: str) -> tuple[float, float]:
    """Return ``(scale, offset)`` with ``S_word(x) = scale * x + offset``."""
    r = check_ratio(r)
    check_word(word)
    scale, offset = 1.0, 0.0
    shift = 1.0 - r
    for symbol in word:
        if symbol == "2":
            offset += scale * shift
        scale *= r
    return scale, offset


def apply_word(r: float, word: str, x: float) -> float:
    scale, offset = affine_of_word(r, word)
    return scale * x + offset


@dataclass(frozen=True)
class Cylinder:
    word: str
    left: float
    right: float
    mass: float
    scale: float
    centroid: float


def cylinder(r: float, word: str) -> Cylinder:
    scale, offset = affine_of_word(r, word)
    return Cylinder(
        word=word,
        left=offset,
        right=offset + scale,
        mass=0.5 ** len(word),
        scale=scale,
        centroid=offset + 0.5 * scale,
    )


def variance(r: float) -> float:
    """Variance of P; its mean is the constant ``MEAN``."""
    return (1.0 - r) / (4.0 * (1.0 + r))


def centroid_of_word(r: float, word: str) -> float:
    """Conditional expectation of P on the cylinder, i.e. ``S_word(1/2)``."""
    return apply_word(r, word, 0.5)


def check_disjoint(r: float, words: Sequence[str]) -> None:
    """Raise OverlappingWords unless the cylinders meet in at most single points."""
    cyls = sorted((cylinder(r, w) for w in words), key=lambda c: (c.left, c.right))
    for prev, nxt in zip(cyls, cyls[1:]):
        if nxt.left < prev.right:
            raise OverlappingWords(f"cylinders of {prev.word!r} and {nxt.word!r} overlap")


def centroid_of_union(r: float, words: Sequence[str]) -> float:
    """Conditional expectation of P given the union of the listed cylinders."""
    if not words:
        raise InvalidWord("centroid_of_union needs at least one word")
    check_disjoint(r, words)
    masses = [0.5 ** len(w) for w in words]
    first = math.fsum(m * centroid_of_word(r, w) for m, w in zip(masses, words))
    return first / math.fsum(masses)


def second_moment_about(r: float, word: str, x0: float) -> float:
    """``integral over J_word of (x - x0)^2 dP``, in closed form."""
    scale, offset = affine_of_word(r, word)
    centre = offset + 0.5 * scale
    return 0.5 ** len(word) * (scale * scale * variance(r) + (centre - x0) ** 2)


def self_similar_sum(r: float, k: int, x0: float) -> float:
    """Sum of ``second_moment_about`` over all words of length k."""
    return math.fsum(second_moment_about(r, w, x0) for w in words_of_length(k))


@dataclass(frozen=True)
class RestrictedMoments:
    """Moments of P restricted to an interval.

    ``second_central`` is the unnormalised integral of ``(x - mean)^2`` over
    the interval, i.e. the squared-error contribution of the interval when it
    is represented by its own centroid.  ``enclosure_width`` is the mass of
    cylinders left unresolved when the recursion stopped; the reported mass is
    exact up to that amount.
    """

    mass: float
    mean: float
    second_central: float
    enclosure_width: float


def restricted_moments(
    r: float,
    lo: float,
    hi: float,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    tol: float = DEFAULT_MOMENT_TOL,
) -> RestrictedMoments:
    """Mass, conditional mean and central second moment of P on ``[lo, hi]``.

    Cylinders wholly inside the interval contribute their exact moments and
    cylinders wholly outside contribute nothing.  A straddling cylinder is
    split until its mass drops below ``tol`` or ``depth_cap`` is reached; it
    is then counted in full if its centroid lies in the interval and its mass
    is added to ``enclosure_width``.
    """
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if lo == hi:
        return RestrictedMoments(0.0, math.nan, 0.0, 0.0)
    var = variance(r)
    shift = 1.0 - r
    inside: list[tuple[float, float, float]] = []  # (mass, centroid, scale)
    unresolved: list[float] = []
    stack = [(1.0, 0.0, 0)]
    while stack:
        scale, offset, depth = stack.pop()
        left, right = offset, offset + scale
        if right <= lo or left >= hi:
            continue
        mass = 0.5**depth
        if lo <= left and right <= hi:
            inside.append((mass, offset + 0.5 * scale, scale))
            continue
        if depth >= depth_cap or mass < tol:
            unresolved.append(mass)
            centre = offset + 0.5 * scale
            if lo <= centre <= hi:
                inside.append((mass, centre, scale))
            continue
        child = scale * r
        stack.append((child, offset + scale * shift, depth + 1))
        stack.append((child, offset, depth + 1))

    total = math.fsum(m for m, _, _ in inside)
    width = math.fsum(unresolved)
    if total == 0.0:
        return RestrictedMoments(0.0, math.nan, 0.0, width)
    mean = math.fsum(m * c for m, c, _ in inside) / total
    central = math.fsum(m * (s * s * var + (c - mean) ** 2) for m, c, s in inside)
    return RestrictedMoments(total, mean, central, width)

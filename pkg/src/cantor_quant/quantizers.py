"""Candidate codebooks for the Cantor measure and their closed-form errors.

Three families are built here:

* ``beta``  - midpoints of level-l cylinders, with the cylinders listed in an
  index set refined one level (the Graf-Luschgy construction).
* ``gamma`` - scaled copies of a two-, three- or four-point base set placed in
  the level-(l-1) cylinders.
* ``delta`` - as ``gamma`` but with a different three-point base set, which
  comes in a left and a right (mirrored) variant.

Every codepoint carries the words whose union it is the centroid of, so a
point built as ``S_w(a(11, 121))`` is labelled ``("w11", "w121")``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CountOutOfRange, IndexSetMismatch, InvalidN
from .measure import (
    affine_of_word,
    centroid_of_union,
    check_ratio,
    check_word,
    mirror,
    variance,
    words_of_length,
)

MAX_N = 2**20

Label = tuple[str, ...]


@dataclass(frozen=True)
class Quantizer:
    """A sorted codebook; ``labels[i]`` are the words generating ``points[i]``."""

    points: tuple[float, ...]
    labels: tuple[Label, ...] | None = None

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise ValueError("a quantizer needs at least one point")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("quantizer points must be strictly increasing")
        if pts[0] < 0.0 or pts[-1] > 1.0:
            raise ValueError("quantizer points must lie in [0, 1]")
        if self.labels is not None and len(self.labels) != len(pts):
            raise ValueError("one label per point required")

    @property
    def n(self) -> int:
        return len(self.points)

    @classmethod
    def from_points(cls, points: Iterable[float]) -> "Quantizer":
        return cls(tuple(sorted(points)))

    @classmethod
    def from_labelled(cls, items: Iterable[tuple[float, Label]]) -> "Quantizer":
        items = sorted(items)
        return cls(tuple(p for p, _ in items), tuple(lab for _, lab in items))

    def mirrored(self) -> "Quantizer":
        """The reflection x -> 1 - x, labels mirrored accordingly."""
        pts = tuple(1.0 - p for p in reversed(self.points))
        labels = None
        if self.labels is not None:
            labels = tuple(tuple(mirror(w) for w in lab) for lab in reversed(self.labels))
        return Quantizer(pts, labels)


@dataclass(frozen=True)
class IndexSet:
    level: int
    words: tuple[str, ...]
    _lookup: frozenset[str] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        words = tuple(check_word(w) for w in self.words)
        if len(set(words)) != len(words):
            raise IndexSetMismatch("index set words must be distinct")
        if any(len(w) != self.level for w in words):
            raise IndexSetMismatch(f"all index set words must have length {self.level}")
        object.__setattr__(self, "words", tuple(sorted(words)))
        object.__setattr__(self, "_lookup", frozenset(words))

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self._lookup


@dataclass(frozen=True)
class LevelIndex:
    n: int
    ell: int
    regime: str  # "power", "lower-half" or "upper-half"


def level_index(n: int) -> LevelIndex:
    if n < 2:
        raise InvalidN(f"n must be at least 2, got {n}")
    ell = n.bit_length() - 1
    base = 1 << ell
    if n == base:
        regime = "power"
    elif n <= 3 * base // 2:
        regime = "lower-half"
    else:
        regime = "upper-half"
    return LevelIndex(n, ell, regime)


def canonical_index_set(level: int, count: int) -> IndexSet:
    """The ``count`` lexicographically smallest words of length ``level``."""
    if not 0 <= count <= 2**level:
        raise CountOutOfRange(f"need 0 <= count <= 2**{level}, got {count}")
    return IndexSet(level, tuple(words_of_length(level)[:count]))


def _check_n(n: int) -> LevelIndex:
    if n > MAX_N:
        raise InvalidN(f"n is capped at {MAX_N}, got {n}")
    return level_index(n)


def _resolve_index_set(index_set: IndexSet | Sequence[str] | None, level: int, count: int) -> IndexSet:
    if index_set is None:
        return canonical_index_set(level, count)
    if not isinstance(index_set, IndexSet):
        index_set = IndexSet(level, tuple(index_set))
    if index_set.level != level or len(index_set) != count:
        raise IndexSetMismatch(
            f"index set must hold {count} words of length {level}, got {len(index_set)} of length {index_set.level}"
        )
    return index_set


def _scaled(r: float, prefix: str, base: Sequence[tuple[float, Label]]) -> list[tuple[float, Label]]:
    scale, offset = affine_of_word(r, prefix)
    return [(scale * p + offset, tuple(prefix + w for w in lab)) for p, lab in base]


def _base(r: float, labels: Sequence[Label]) -> list[tuple[float, Label]]:
    return [(centroid_of_union(r, list(lab)), lab) for lab in labels]


def beta_index_count(n: int) -> tuple[int, int]:
    """``(level, card(I))`` required by ``build_beta``."""
    li = level_index(n)
    return li.ell, n - (1 << li.ell)


def build_beta(r: float, n: int, index_set: IndexSet | Sequence[str] | None = None) -> Quantizer:
    r = check_ratio(r)
    li = _check_n(n)
    index_set = _resolve_index_set(index_set, li.ell, n - (1 << li.ell))
    items: list[tuple[float, Label]] = []
    for word in words_of_length(li.ell):
        children = (word + "1", word + "2") if word in index_set else (word,)
        for child in children:
            scale, offset = affine_of_word(r, child)
            items.append((offset + 0.5 * scale, (child,)))
    return Quantizer.from_labelled(items)


def beta_distortion_formula(r: float, n: int) -> float:
    li = level_index(n)
    ell = li.ell
    return r ** (2 * ell) * variance(r) * (2 ** (ell + 1) - n + r * r * (n - 2**ell)) / 2**ell


GAMMA2: tuple[Label, ...] = (("1",), ("2",))
GAMMA3: tuple[Label, ...] = (("11", "121"), ("122", "211"), ("212", "22"))
GAMMA4: tuple[Label, ...] = (("11",), ("12",), ("21",), ("22",))
DELTA3_LEFT: tuple[Label, ...] = (("11", "121", "1221"), ("1222", "21"), ("22",))
DELTA3_RIGHT: tuple[Label, ...] = (("11",), ("12", "2111"), ("2112", "212", "22"))


def recursive_index_count(n: int) -> tuple[int, int]:
    """``(level, card(I))`` required by ``build_gamma`` / ``build_delta`` for n >= 4."""
    li = level_index(n)
    half = 3 * (1 << (li.ell - 1))
    if n <= half:
        return li.ell - 1, n - (1 << li.ell)
    return li.ell - 1, n - half


def _build_recursive(r, n, index_set, two, three, four) -> Quantizer:
    r = check_ratio(r)
    li = _check_n(n)
    if n == 2:
        return Quantizer.from_labelled(_base(r, two))
    if n == 3:
        return Quantizer.from_labelled(_base(r, three))
    level, count = recursive_index_count(n)
    index_set = _resolve_index_set(index_set, level, count)
    base2, base3, base4 = _base(r, two), _base(r, three), _base(r, four)
    lower = n <= 3 * (1 << (li.ell - 1))
    items: list[tuple[float, Label]] = []
    for word in words_of_length(level):
        if lower:
            base = base3 if word in index_set else base2
        else:
            base = base4 if word in index_set else base3
        items.extend(_scaled(r, word, base))
    return Quantizer.from_labelled(items)


def build_gamma(r: float, n: int, index_set: IndexSet | Sequence[str] | None = None) -> Quantizer:
    """Codebook of the gamma family; ``index_set`` is ignored for n in {2, 3}."""
    return _build_recursive(r, n, index_set, GAMMA2, GAMMA3, GAMMA4)


def delta3_labels(variant: str = "left") -> tuple[Label, ...]:
    if variant == "left":
        return DELTA3_LEFT
    if variant == "right":
        return DELTA3_RIGHT
    raise ValueError(f"variant must be 'left' or 'right', got {variant!r}")


def build_delta(
    r: float, n: int, index_set: IndexSet | Sequence[str] | None = None, variant: str = "left"
) -> Quantizer:
    three = delta3_labels(variant)
    # the four-point base is the lower-half branch at n = 4, i.e. S1(delta2) u S2(delta2)
    four = tuple((p + w,) for p in "12" for (w,) in GAMMA2)
    return _build_recursive(r, n, index_set, GAMMA2, three, four)


def closed_form_v_beta3(r: float) -> float:
    return -(r - 1.0) * (r**4 + r**2) / (8.0 * (r + 1.0))


def closed_form_v_gamma3(r: float) -> float:
    num = r**7 + r**6 + 4 * r**5 - 2 * r**4 - 2 * r**3 - 8 * r**2 + 9 * r - 3
    return -num / (48.0 * (r + 1.0))


def gamma_distortion_formula(r: float, n: int) -> float:
    """Distortion of ``build_gamma(r, n)`` assuming it is a CVT."""
    li = level_index(n)
    v2 = r * r * variance(r)
    if n == 2:
        return v2
    v3 = closed_form_v_gamma3(r)
    if n == 3:
        return v3
    ell = li.ell
    if li.regime == "power":
        return r ** (2 * ell) * variance(r)
    v4 = r**4 * variance(r)
    factor = r ** (2 * (ell - 1)) / 2 ** (ell - 1)
    if li.regime == "lower-half":
        return factor * (v3 * (n - 2**ell) + v2 * (3 * 2 ** (ell - 1) - n))
    return factor * (v3 * (2 ** (ell + 1) - n) + v4 * (n - 3 * 2 ** (ell - 1)))


def build_family(
    family: str,
    r: float,
    n: int,
    index_set: IndexSet | Sequence[str] | None = None,
    variant: str = "left",
) -> Quantizer:
    if family == "beta":
        return build_beta(r, n, index_set)
    if family == "gamma":
        return build_gamma(r, n, index_set)
    if family == "delta":
        return build_delta(r, n, index_set, variant)
    raise ValueError(f"unknown family {family!r}; expected beta, gamma or delta")

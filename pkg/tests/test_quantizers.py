import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantor_quant.distortion import distortion
from cantor_quant.errors import CountOutOfRange, IndexSetMismatch, InvalidN
from cantor_quant.measure import centroid_of_union, centroid_of_word, mirror, variance, words_of_length
from cantor_quant.quantizers import (
    MAX_N,
    IndexSet,
    Quantizer,
    beta_distortion_formula,
    beta_index_count,
    build_beta,
    build_delta,
    build_family,
    build_gamma,
    canonical_index_set,
    closed_form_v_beta3,
    closed_form_v_gamma3,
    gamma_distortion_formula,
    level_index,
    recursive_index_count,
)

from conftest import ANCHOR, R0


def centroids(r, *groups):
    return [centroid_of_union(r, list(g)) for g in groups]


class TestQuantizer:
    def test_validation(self):
        with pytest.raises(ValueError):
            Quantizer(())
        with pytest.raises(ValueError):
            Quantizer((0.2, 0.2))
        with pytest.raises(ValueError):
            Quantizer((0.3, 0.1))
        with pytest.raises(ValueError):
            Quantizer((-0.1, 0.5))

    def test_mirror(self):
        q = Quantizer.from_labelled([(0.2, ("1",)), (0.9, ("22",))])
        m = q.mirrored()
        assert m.points == pytest.approx((0.1, 0.8))
        assert m.labels == (("11",), ("2",))


class TestLevelIndex:
    @pytest.mark.parametrize(
        "n, ell, regime",
        [(2, 1, "power"), (3, 1, "lower-half"), (4, 2, "power"), (5, 2, "lower-half"), (6, 2, "lower-half"), (7, 2, "upper-half")],
    )
    def test_examples(self, n, ell, regime):
        li = level_index(n)
        assert (li.ell, li.regime) == (ell, regime)

    def test_invalid(self):
        with pytest.raises(InvalidN):
            level_index(1)

    def test_cap(self):
        with pytest.raises(InvalidN):
            build_beta(0.3, MAX_N + 1)


class TestIndexSets:
    def test_canonical(self):
        assert canonical_index_set(2, 0).words == ()
        assert canonical_index_set(2, 1).words == ("11",)
        assert canonical_index_set(3, 3).words == ("111", "112", "121")

    def test_out_of_range(self):
        with pytest.raises(CountOutOfRange):
            canonical_index_set(2, 5)

    def test_mismatch(self):
        with pytest.raises(IndexSetMismatch):
            build_beta(0.3, 5, ["11", "12"])
        with pytest.raises(IndexSetMismatch):
            build_beta(0.3, 5, ["1"])
        with pytest.raises(ValueError):
            IndexSet(2, ("11", "11"))


class TestBeta:
    def test_two_points(self):
        assert build_beta(0.3, 2).points == pytest.approx(centroids(0.3, "1", "2"))

    def test_four_points(self):
        q = build_beta(R0, 4)
        assert q.points == pytest.approx([centroid_of_word(R0, w) for w in ("11", "12", "21", "22")], abs=1e-15)
        assert q.points[0] == pytest.approx(R0 * R0 / 2, abs=1e-15)

    def test_three_points(self):
        q = build_beta(R0, 3, ["1"])
        assert q.points == pytest.approx([centroid_of_word(R0, w) for w in ("11", "12", "2")], abs=1e-15)
        assert q.labels == (("11",), ("12",), ("2",))

    @pytest.mark.parametrize("n", range(2, 65))
    def test_cardinality(self, n):
        rng = random.Random(n)
        level, count = beta_index_count(n)
        for _ in range(3):
            words = rng.sample(words_of_length(level), count)
            assert build_beta(0.37, n, words).n == n

    def test_formula_one_third(self):
        for n in range(2, 40):
            ell = level_index(n).ell
            expected = (1 / 18**ell) * (1 / 8) * (2 ** (ell + 1) - n + (n - 2**ell) / 9)
            assert beta_distortion_formula(1 / 3, n) == pytest.approx(expected, rel=1e-13)

    def test_formula_anchors(self):
        assert beta_distortion_formula(R0, 4) == pytest.approx(R0**4 * variance(R0), abs=1e-16)
        assert beta_distortion_formula(R0, 4) == pytest.approx(0.00352544, abs=ANCHOR)
        assert beta_distortion_formula(R0, 3) == pytest.approx(0.0110764, abs=ANCHOR)

    @pytest.mark.parametrize("n", range(2, 17))
    def test_index_set_independence(self, n):
        level, count = beta_index_count(n)
        values = [
            distortion(R0, build_beta(R0, n, list(c))).value
            for c in itertools.islice(itertools.combinations(words_of_length(level), count), 40)
        ]
        assert max(values) - min(values) <= 1e-12

    @pytest.mark.parametrize("ell", range(1, 6))
    def test_scaling_law(self, ell):
        n = 2**ell
        v_n = distortion(0.4, build_beta(0.4, n)).value
        v_2n = distortion(0.4, build_beta(0.4, 2 * n)).value
        assert v_2n == pytest.approx(0.4**2 * v_n, abs=1e-12)


class TestGamma:
    def test_base_sets(self):
        assert build_gamma(R0, 2).points == pytest.approx(centroids(R0, "1", "2"))
        expected = centroids(R0, ("11", "121"), ("122", "211"), ("212", "22"))
        assert build_gamma(R0, 3).points == pytest.approx(expected, abs=1e-15)

    def test_four_points_empty_index(self):
        q = build_gamma(R0, 4, [])
        assert q.points == pytest.approx([centroid_of_word(R0, w) for w in ("11", "12", "21", "22")], abs=1e-15)

    def test_labels_are_prefixed(self):
        q = build_gamma(0.4, 6, ["1", "2"])
        assert ("111", "1121") in q.labels
        assert ("2122", "2211") in q.labels

    @pytest.mark.parametrize("n", range(2, 40))
    def test_cardinality_and_order(self, n):
        q = build_gamma(0.4, n)
        assert q.n == n
        assert all(a < b for a, b in zip(q.points, q.points[1:]))

    def test_index_count(self):
        assert recursive_index_count(6) == (1, 2)
        assert recursive_index_count(7) == (1, 1)

    def test_formula_regimes(self):
        r = 0.4
        v = variance(r)
        assert gamma_distortion_formula(r, 8) == pytest.approx(r**6 * v, rel=1e-14)
        assert gamma_distortion_formula(r, 6) == pytest.approx(r * r * closed_form_v_gamma3(r), rel=1e-14)
        assert gamma_distortion_formula(r, 3) == closed_form_v_gamma3(r)
        assert gamma_distortion_formula(r, 2) == pytest.approx(r * r * v, rel=1e-14)

    @pytest.mark.parametrize("r", [0.3613249509, 0.37, 0.40, 0.43, R0, 0.4376259168])
    def test_engine_matches_formula(self, r):
        for n in range(2, 17):
            assert distortion(r, build_gamma(r, n)).value == pytest.approx(gamma_distortion_formula(r, n), abs=1e-10)


class TestDelta:
    def test_base_sets(self):
        assert build_delta(R0, 2).points == pytest.approx(centroids(R0, "1", "2"))
        left = centroids(R0, ("11", "121", "1221"), ("1222", "21"), ("22",))
        assert build_delta(R0, 3).points == pytest.approx(left, abs=1e-15)
        right = centroids(0.44, ("11",), ("12", "2111"), ("2112", "212", "22"))
        assert build_delta(0.44, 3, variant="right").points == pytest.approx(right, abs=1e-15)

    def test_four_points_empty_index(self):
        q = build_delta(R0, 4, [])
        assert q.points == pytest.approx([centroid_of_word(R0, w) for w in ("11", "12", "21", "22")], abs=1e-15)

    @given(st.integers(min_value=2, max_value=40), st.floats(min_value=0.05, max_value=0.49), st.randoms())
    @settings(max_examples=60)
    def test_mirror_relation(self, n, r, rnd):
        level, count = recursive_index_count(n) if n > 3 else (1, 0)
        words = rnd.sample(words_of_length(level), count) if n > 3 else None
        mirrored = [mirror(w) for w in words] if words is not None else None
        right = build_delta(r, n, words, variant="right")
        left = build_delta(r, n, mirrored, variant="left")
        assert right.points == pytest.approx(left.mirrored().points, abs=1e-14)

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            build_delta(0.4, 3, variant="middle")


class TestClosedForms:
    def test_beta3(self):
        assert closed_form_v_beta3(1 / 3) == pytest.approx((1 / 18) * (1 / 8) * (4 - 3 + 1 / 9), rel=1e-14)
        assert closed_form_v_beta3(R0) == pytest.approx(0.0110764, abs=ANCHOR)
        assert closed_form_v_beta3(1e-6) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("r", [0.1, 0.3, 1 / 3, 0.42, 0.49])
    def test_beta3_forms_agree(self, r):
        assert closed_form_v_beta3(r) == pytest.approx(beta_distortion_formula(r, 3), rel=1e-14)
        assert closed_form_v_beta3(r) == pytest.approx(0.5 * r * r * (r * r + 1) * variance(r), rel=1e-14)

    def test_gamma3(self):
        assert closed_form_v_gamma3(R0) == pytest.approx(0.0110764, abs=ANCHOR)
        assert closed_form_v_gamma3(0.42) > closed_form_v_beta3(0.42)
        assert closed_form_v_gamma3(0.4376259168) < closed_form_v_beta3(0.4376259168)

    def test_gamma3_matches_engine(self):
        r = R0
        assert distortion(r, build_gamma(r, 3)).value == pytest.approx(closed_form_v_gamma3(r), abs=1e-12)

    def test_build_family(self):
        assert build_family("gamma", 0.4, 3) == build_gamma(0.4, 3)
        with pytest.raises(ValueError):
            build_family("alpha", 0.4, 3)

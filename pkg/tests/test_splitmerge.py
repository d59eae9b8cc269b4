import math
import warnings
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clustcompare import (
    InvalidInputError,
    bottom,
    components,
    derivation_graph,
    enumerate_clusterings,
    from_clusters,
    k_measure,
    meet,
    merge_set,
    s_entropy,
    s_max,
    s_mse,
    s_prime,
    s_star,
    sh_measure,
    smse_measure,
    split_set,
    subcomponent_pairs,
    top,
    van_dongen,
)
from clustcompare.core import Clustering
from clustcompare.splitmerge import (
    EntropyBoundMeasure,
    SizeMeasure,
    SUBCOMPONENT_MEASURES,
    register_subcomponent_measure,
    s_star_by_pairs,
)

from conftest import clustering_pairs, clusterings, sets_of
from oracles import s_star_sets, sse


def _component(left_blocks, right_blocks):
    left, right = from_clusters(left_blocks), from_clusters(right_blocks)
    (comp,) = components(left, right)
    return comp


class TestSubcomponentGraphs:
    def test_split_single_left_cluster(self):
        (g,) = split_set(_component([[1, 2, 3]], [[1, 2], [3]]))
        assert g.source_cluster == {1, 2, 3}
        assert set(g.targets) == {frozenset({1, 2}), frozenset({3})}

    def test_split_uses_global_ids(self):
        left = from_clusters([[1, 2], [3], [4, 5]])
        right = from_clusters([[1, 2], [3, 4, 5]])
        comp = components(left, right)[1]
        graphs = {g.source_cluster: set(g.targets) for g in split_set(comp)}
        assert graphs == {
            frozenset({3}): {frozenset({3})},
            frozenset({4, 5}): {frozenset({4, 5})},
        }

    def test_identical_sides(self):
        comp = _component([[1, 2, 3]], [[1, 2, 3]])
        assert all(len(g.targets) == 1 for g in split_set(comp))
        assert all(len(g.sources) == 1 for g in merge_set(comp))

    def test_merge_single_right_cluster(self):
        (g,) = merge_set(_component([[1, 2], [3]], [[1, 2, 3]]))
        assert g.target_cluster == {1, 2, 3}
        assert set(g.sources) == {frozenset({1, 2}), frozenset({3})}

    @given(clustering_pairs())
    def test_sinks_equal_sources_equal_meet(self, pair):
        left, right = pair
        m = meet(left, right)
        for comp in components(left, right):
            sinks = Counter(t for g in split_set(comp) for t in g.targets)
            sources = Counter(s for g in merge_set(comp) for s in g.sources)
            induced_meet = Counter(c for c in m.clusters if c <= comp.join_cluster)
            assert sinks == sources == induced_meet


class TestDerivationGraph:
    def test_self(self):
        c = from_clusters([[1, 2], [3]])
        d = derivation_graph(c, c)
        assert d.middle_part == c
        assert d.split_edges == ((0, 0), (1, 1)) and d.merge_edges == ((0, 0), (1, 1))

    def test_top_bottom(self):
        d = derivation_graph(top(3), bottom(3))
        assert d.middle_part == bottom(3)
        assert d.split_edges == ((0, 0), (0, 1), (0, 2))
        assert d.merge_edges == ((0, 0), (1, 1), (2, 2))

    def test_running_example(self, five):
        d = derivation_graph(*five)
        assert d.middle_part == from_clusters([[1, 2], [3], [4], [5]])
        assert d.split_edges == ((0, 0), (0, 1), (1, 2), (1, 3))
        assert d.merge_edges == ((0, 0), (1, 1), (2, 1), (3, 2))

    @given(clustering_pairs())
    def test_structure(self, pair):
        d = derivation_graph(*pair)
        k = len(d.middle_part)
        assert sorted(m for _, m in d.split_edges) == list(range(k))
        assert sorted(m for m, _ in d.merge_edges) == list(range(k))


class TestSubcomponentPairs:
    def test_count(self, five):
        assert len(subcomponent_pairs(*five)) == 4

    def test_self(self):
        c = from_clusters([[1, 2], [3], [4, 5, 6]])
        pairs = subcomponent_pairs(c, c)
        assert len(pairs) == 3
        for p in pairs:
            assert p.split.source_cluster == p.merge.target_cluster == p.meet_cluster
            assert p.split.targets == p.merge.sources

    def test_top_bottom(self):
        assert len(subcomponent_pairs(top(5), bottom(5))) == 5

    @given(clustering_pairs())
    def test_bijection(self, pair):
        pairs = subcomponent_pairs(*pair)
        assert {p.meet_cluster for p in pairs} == meet(*pair).as_sets()
        assert len(pairs) == len(meet(*pair))
        for p in pairs:
            assert p.split.source_cluster & p.merge.target_cluster == p.meet_cluster


class TestSubcomponentMeasures:
    def test_entropy_example(self):
        value = s_entropy({1, 2, 3}, from_clusters([[1, 2], [3]]))
        assert value == pytest.approx(1 - (math.log(3) - 2 / 3 * math.log(2)) / math.log(3), abs=1e-12)
        assert value == pytest.approx(0.4206, abs=1e-3)

    def test_entropy_extremes(self):
        assert s_entropy({4}, top(1)) == 1.0
        assert s_entropy({1, 2}, bottom(2)) == 0.0
        assert s_entropy({1, 2, 3}, top(3)) == 1.0

    def test_entropy_rejects_mismatched_partition(self):
        with pytest.raises(InvalidInputError):
            s_entropy({1, 2, 3}, top(2))

    def test_max(self):
        assert s_max({1, 2, 3}, from_clusters([[1, 2], [3]])) == pytest.approx(2 / 3)
        assert s_max({1, 2, 3}, top(3)) == 1.0
        assert s_max({1, 2, 3, 4}, bottom(4)) == 0.25

    def test_mse_examples(self):
        halves = from_clusters([[1, 2], [3, 4]])
        assert s_mse({1, 2, 3, 4}, halves, [0, 0, 10, 10]) == 0.0
        assert s_mse({1, 2, 3, 4}, top(4), [0, 0, 10, 10]) == 1.0
        # part means equal the overall mean, so the error does not shrink
        assert s_mse({1, 2, 3, 4}, halves, [-1, 1, -1, 1]) == 1.0

    def test_mse_matches_oracle(self):
        rng = np.random.default_rng(0)
        feats = rng.normal(size=(9, 3))
        part = from_clusters([[1, 4], [2, 3, 5], [6]])
        cluster = {1, 2, 3, 4, 5, 6}
        expected = (sse([1, 4], feats) + sse([2, 3, 5], feats) + sse([6], feats)) / sse(sorted(cluster), feats)
        assert s_mse(cluster, part, feats) == pytest.approx(expected, abs=1e-12)

    def test_mse_zero_variance_falls_back(self):
        part = from_clusters([[1, 2], [3]])
        value, flag = SUBCOMPONENT_MEASURES["mse"].evaluate({1, 2, 3}, part, np.ones((3, 2)))
        assert flag == "mse-zero-variance"
        assert value == s_entropy({1, 2, 3}, part)

    def test_mse_needs_features(self):
        with pytest.raises(InvalidInputError):
            s_mse({1, 2}, bottom(2), None)

    @pytest.mark.parametrize("m", range(1, 9))
    def test_entropy_normalization_exhaustive(self, m):
        cluster = set(range(1, m + 1))
        for part in enumerate_clusterings(m):
            value = s_entropy(cluster, part)
            if part.is_top():
                assert value == 1.0
            elif part.is_bottom():
                assert value == 0.0
            else:
                assert 0.0 < value < 1.0

    @pytest.mark.parametrize("m", range(2, 9))
    def test_entropy_monotone_exhaustive(self, m):
        cluster = set(range(1, m + 1))
        for part in enumerate_clusterings(m):
            value = s_entropy(cluster, part)
            sizes = sorted(part.sizes.tolist())
            # splitting any part into two strictly lowers the score
            for i, s in enumerate(sizes):
                for a in range(1, s // 2 + 1):
                    finer = sizes[:i] + sizes[i + 1:] + [a, s - a]
                    assert _entropy_of_sizes(finer) < value
            # moving a point from a smaller part to a larger one never lowers it
            for i, small in enumerate(sizes):
                for j, big in enumerate(sizes):
                    if i != j and 2 <= small <= big:
                        skewed = list(sizes)
                        skewed[i] -= 1
                        skewed[j] += 1
                        assert _entropy_of_sizes(skewed) >= value - 1e-15


def _entropy_of_sizes(sizes):
    labels = [i for i, s in enumerate(sizes) for _ in range(s)]
    return s_entropy(range(1, len(labels) + 1), Clustering(labels))


class TestSStar:
    def test_running_example(self, five):
        value = sh_measure(*five).value
        assert value == pytest.approx(0.1682, abs=1e-3)
        assert value == pytest.approx(s_star_sets(*map(sets_of, five)), abs=1e-12)

    def test_worst_clustering_is_zero(self):
        assert sh_measure(from_clusters([[1, 2], [3]]), from_clusters([[1], [2, 3]])).value == 0.0

    def test_against_bottom(self):
        assert sh_measure(from_clusters([[1, 2], [3]]), bottom(3)).value == pytest.approx(1 / 3, abs=1e-15)

    @given(clusterings())
    def test_self_is_one(self, c):
        assert sh_measure(c, c).value == 1.0
        feats = np.arange(c.n, dtype=float)
        assert smse_measure(c, c, feats).value == 1.0
        assert s_star(c, c, "max", "max").value == 1.0

    @given(clustering_pairs(max_n=9))
    def test_against_literal_sum(self, pair):
        assert sh_measure(*pair).value == pytest.approx(s_star_sets(*map(sets_of, pair)), abs=1e-12)

    @given(clustering_pairs())
    def test_symmetric(self, pair):
        left, right = pair
        assert sh_measure(left, right).value == pytest.approx(sh_measure(right, left).value, abs=1e-12)

    @given(clustering_pairs(max_n=10))
    def test_meet_weighted_paths_agree(self, pair):
        assert sh_measure(*pair).value == pytest.approx(s_star_by_pairs(*pair), abs=1e-12)

    @given(clustering_pairs(max_n=10), st.integers(0, 2**32 - 1))
    def test_join_weighted(self, pair, seed):
        left, right = pair
        feats = np.random.default_rng(seed).normal(size=(left.n, 2))
        for args in (("entropy", "entropy", None), ("mse", "mse", feats), ("entropy", "max", None)):
            whole = s_star(left, right, *args).value
            parts = 0.0
            for comp in components(left, right):
                local = None if args[2] is None else args[2][np.array(comp.points) - 1]
                parts += comp.size / left.n * s_star(comp.left, comp.right, args[0], args[1], local).value
            assert whole == pytest.approx(parts, abs=1e-12)

    def test_features_required(self, five):
        with pytest.raises(InvalidInputError):
            s_star(*five, "mse", "mse")
        with pytest.raises(InvalidInputError):
            smse_measure(*five, np.zeros((4, 1)))

    def test_flags_zero_variance(self):
        left = from_clusters([[1, 2, 3], [4]])
        right = from_clusters([[1, 2], [3, 4]])
        feats = np.array([[1.0], [1.0], [1.0], [2.0]])
        assert "mse-zero-variance" in smse_measure(left, right, feats).flags


class TestConsistency:
    @given(clusterings(min_n=1, max_n=12), st.integers(0, 2**32 - 1))
    def test_product_form_is_consistent(self, part, seed):
        whole = top(part.n)
        cluster = range(1, part.n + 1)
        feats = np.random.default_rng(seed).normal(size=(part.n, 2))
        assert s_star(whole, part).value == pytest.approx(s_entropy(cluster, part), abs=1e-12)
        assert s_star(part, whole).value == pytest.approx(s_entropy(cluster, part), abs=1e-12)
        assert s_star(whole, part, "mse", "mse", feats).value == pytest.approx(
            s_mse(cluster, part, feats), abs=1e-12
        )
        assert s_star(part, whole, "mse", "mse", feats).value == pytest.approx(
            s_mse(cluster, part, feats), abs=1e-12
        )

    @given(clusterings(min_n=2, max_n=12))
    def test_mean_form_is_not(self, part):
        whole = top(part.n)
        s = s_entropy(range(1, part.n + 1), part)
        mean_form = s_prime(whole, part).value
        assert mean_form == pytest.approx(s / 2 + 0.5, abs=1e-12)
        if s < 1:
            assert mean_form > s


class TestSPrime:
    def test_max_gives_van_dongen(self, five):
        assert s_prime(*five, "max", "max").value == pytest.approx(0.7, abs=1e-15)

    @given(clustering_pairs(min_n=2))
    def test_max_gives_van_dongen_everywhere(self, pair):
        assert s_prime(*pair, "max", "max").value == pytest.approx(van_dongen(*pair).value, abs=1e-12)

    @given(clustering_pairs(min_n=4, max_n=12))
    def test_entropy_over_log_k(self, pair):
        left, right = pair
        k = max(2, len(left), len(right))
        m = EntropyBoundMeasure(k)
        assert s_prime(left, right, m, m).value == pytest.approx(k_measure(left, right, k).value, abs=1e-12)

    @given(clustering_pairs(min_n=4, max_n=12))
    def test_entropy_over_log_k_squared_halves_the_gap(self, pair):
        left, right = pair
        k = max(2, len(left), len(right))
        m = EntropyBoundMeasure(k * k)
        expected = (1 + k_measure(left, right, k).value) / 2
        assert s_prime(left, right, m, m).value == pytest.approx(expected, abs=1e-12)

    @given(clusterings())
    def test_self_is_one(self, c):
        assert s_prime(c, c).value == pytest.approx(1.0, abs=1e-15)


class TestConditionalNormalization:
    @pytest.mark.parametrize("n", range(1, 6))
    def test_exhaustive(self, n):
        parts = list(enumerate_clusterings(n))
        for truth in parts:
            for pred in parts:
                value = sh_measure(truth, pred).value
                worst = meet(truth, pred).is_bottom() and not (truth.as_sets() & pred.as_sets())
                if truth == pred:
                    assert value == 1.0
                elif worst:
                    assert value == 0.0
                else:
                    assert 0.0 < value < 1.0


class TestRegistry:
    def test_register_normalized_measure_silently(self):
        class Gini(SizeMeasure):
            name = "gini_test"

            def from_sizes(self, sizes):
                m = sizes.sum()
                if sizes.size == 1:
                    return 1.0
                if sizes.size == m:
                    return 0.0
                gini = 1 - ((sizes / m) ** 2).sum()
                return 1 - gini / (1 - 1 / m)

        with warnings.catch_warnings():
            warnings.simplefilter("error")
            register_subcomponent_measure(Gini())
        try:
            c = from_clusters([[1, 2], [3, 4]])
            assert s_star(c, c, "gini_test", "gini_test").value == 1.0
        finally:
            del SUBCOMPONENT_MEASURES["gini_test"]

    def test_register_warns_for_unnormalized(self):
        class Constant(SizeMeasure):
            name = "half_test"

            def from_sizes(self, sizes):
                return 0.5

        with pytest.warns(UserWarning, match="not normalized"):
            register_subcomponent_measure(Constant())
        del SUBCOMPONENT_MEASURES["half_test"]

    def test_unknown_name(self, five):
        with pytest.raises(InvalidInputError):
            s_star(*five, "nope", "entropy")

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stylochron.errors import SpaceMismatchError
from stylochron.features import FeatureVector
from stylochron.metricspace import (
    RankVector,
    distance_matrix,
    max_footrule,
    rank_distance,
    rank_transform,
)


def fv(values, doc_id="d", space="s"):
    return FeatureVector(
        doc_id=doc_id,
        space_id=space,
        names=tuple(f"f{i}" for i in range(len(values))),
        values=tuple(values),
    )


def naive_ranks(values):
    # independent O(n^2) average-rank computation
    out = []
    for v in values:
        higher = sum(1 for u in values if u > v)
        equal = sum(1 for u in values if u == v)
        out.append(higher + 1 + (equal - 1) / 2)
    return out


class TestRankTransform:
    def test_strict_ordering(self):
        assert rank_transform(fv([0.5, 0.3, 0.2])).ranks == (1, 2, 3)

    def test_tie_average(self):
        assert rank_transform(fv([0.4, 0.4, 0.2])).ranks == (1.5, 1.5, 3)

    def test_full_tie(self):
        assert rank_transform(fv([1, 1, 1, 1])).ranks == (2.5, 2.5, 2.5, 2.5)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            rank_transform(fv([]))

    @given(st.lists(st.integers(min_value=0, max_value=6), min_size=1, max_size=60))
    @settings(max_examples=200, deadline=None)
    def test_rank_sum_and_oracle(self, values):
        ranks = rank_transform(fv(values)).ranks
        n = len(values)
        assert sum(ranks) == pytest.approx(n * (n + 1) / 2, abs=1e-9)
        assert list(ranks) == naive_ranks(values)


class TestRankDistance:
    def test_reversal(self):
        a = RankVector("a", "s", (1, 2, 3))
        b = RankVector("b", "s", (3, 2, 1))
        assert rank_distance(a, b) == 4

    def test_identity(self):
        a = RankVector("a", "s", (2, 1, 3))
        assert rank_distance(a, a) == 0

    def test_normalized_two_elements(self):
        a = RankVector("a", "s", (1, 2))
        b = RankVector("b", "s", (2, 1))
        assert rank_distance(a, b) == 2
        assert max_footrule(2) == 2
        assert rank_distance(a, b, normalized=True) == 1.0

    def test_space_mismatch(self):
        a = RankVector("a", "s1", (1, 2))
        b = RankVector("b", "s2", (1, 2))
        with pytest.raises(SpaceMismatchError):
            rank_distance(a, b)

    @given(
        st.lists(st.integers(min_value=0, max_value=9), min_size=2, max_size=40),
        st.data(),
    )
    @settings(max_examples=200, deadline=None)
    def test_metric_axioms(self, values_a, data):
        n = len(values_a)
        ints = st.lists(st.integers(min_value=0, max_value=9), min_size=n, max_size=n)
        a = rank_transform(fv(values_a, "a"))
        b = rank_transform(fv(data.draw(ints), "b"))
        c = rank_transform(fv(data.draw(ints), "c"))
        dab, dba = rank_distance(a, b), rank_distance(b, a)
        assert dab == dba
        assert dab >= 0
        assert rank_distance(a, a) == 0
        assert rank_distance(a, c) <= dab + rank_distance(b, c) + 1e-9

    @given(st.lists(st.integers(min_value=-50, max_value=50), min_size=2, max_size=30))
    @settings(max_examples=200, deadline=None)
    def test_monotone_transform_invariance(self, values):
        values = [float(v) for v in values]
        a = rank_transform(fv(values, "a"))
        # strictly increasing maps leave all rankings unchanged
        for transform in (lambda x: 3 * x + 7, lambda x: x ** 3, np.arctan):
            b = rank_transform(fv([float(transform(v)) for v in values], "b"))
            assert a.ranks == b.ranks

    @given(st.permutations(list(range(1, 9))))
    @settings(max_examples=100, deadline=None)
    def test_distance_from_full_tie(self, perm):
        n = len(perm)
        tied = rank_transform(fv([1.0] * n, "t"))
        strict = RankVector("s", tied.space_id, tuple(float(p) for p in perm))
        expected = sum(abs(r - (n + 1) / 2) for r in perm)
        assert rank_distance(tied, strict) == pytest.approx(expected, abs=1e-9)


class TestDistanceMatrix:
    def test_identical_documents_zero_off_diagonal(self):
        vecs = [fv([1, 2, 3], "a"), fv([1, 2, 3], "b")]
        dm = distance_matrix(vecs)
        assert dm.d[0, 1] == 0

    def test_matches_pairwise_calls(self):
        vecs = [fv([3, 1, 2], "a"), fv([1, 2, 3], "b"), fv([2, 2, 2], "c")]
        dm = distance_matrix(vecs)
        ranked = [rank_transform(v) for v in vecs]
        for i in range(3):
            for j in range(3):
                expected = 0.0 if i == j else rank_distance(ranked[i], ranked[j])
                assert dm.d[i, j] == expected

    def test_fifty_random_vectors_match_naive_oracle(self):
        rng = np.random.default_rng(42)
        vecs = [fv(rng.integers(0, 20, 30).tolist(), f"d{i}") for i in range(50)]
        dm = distance_matrix(vecs)
        for i in range(50):
            ri = naive_ranks(vecs[i].values)
            for j in range(50):
                rj = naive_ranks(vecs[j].values)
                oracle = sum(abs(x - y) for x, y in zip(ri, rj))
                assert dm.d[i, j] == oracle  # bit-exact

    def test_space_mismatch(self):
        with pytest.raises(SpaceMismatchError):
            distance_matrix([fv([1, 2], "a", "s1"), fv([1, 2], "b", "s2")])

    def test_too_few_vectors(self):
        with pytest.raises(ValueError):
            distance_matrix([fv([1, 2], "a")])

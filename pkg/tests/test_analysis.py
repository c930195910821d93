import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stylochron.analysis import (
    cut_clusters,
    dendrogram_svg,
    hierarchical_cluster,
    pca_project,
    to_merge_json,
    to_newick,
)
from stylochron.errors import DegenerateDataError, InvalidMatrixError
from stylochron.features import FeatureVector
from stylochron.metricspace import DistanceMatrix


def dm_from(arr, ids=None):
    arr = np.asarray(arr, dtype=float)
    ids = ids or tuple(f"d{i}" for i in range(arr.shape[0]))
    return DistanceMatrix(doc_ids=tuple(ids), d=arr)


def fv(values, doc_id="d", space="s"):
    return FeatureVector(
        doc_id=doc_id,
        space_id=space,
        names=tuple(f"f{i}" for i in range(len(values))),
        values=tuple(float(v) for v in values),
    )


def planted_matrix(rng, n=20, sep=10.0):
    """Two groups of n/2 points: small within-group, large between-group."""
    half = n // 2
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            same = (i < half) == (j < half)
            base = 1.0 if same else sep
            d[i, j] = d[j, i] = base + rng.uniform(0, 0.2)
    return dm_from(d)


class TestHierarchicalCluster:
    def test_two_points(self):
        dend = hierarchical_cluster(dm_from([[0, 3.5], [3.5, 0]]))
        assert dend.merges == ((0, 1, 3.5, 2),)

    def test_three_point_upgma_hand_trace(self):
        d = dm_from([[0, 1, 10], [1, 0, 10], [10, 10, 0]], ("A", "B", "C"))
        dend = hierarchical_cluster(d, "average")
        assert dend.merges[0] == (0, 1, 1.0, 2)
        assert dend.merges[1] == (2, 3, 10.0, 3)

    def test_complete_vs_single_linkage(self):
        d = dm_from([[0, 1, 4], [1, 0, 6], [4, 6, 0]])
        comp = hierarchical_cluster(d, "complete")
        sing = hierarchical_cluster(d, "single")
        assert comp.merges[1][2] == 6.0
        assert sing.merges[1][2] == 4.0

    def test_planted_two_clusters_recovered(self):
        rng = np.random.default_rng(7)
        dend = hierarchical_cluster(planted_matrix(rng))
        labels = cut_clusters(dend, 2)
        groups = {labels[f"d{i}"] for i in range(10)}
        assert len(groups) == 1
        assert labels["d0"] != labels["d10"]

    def test_deterministic_tie_breaking(self):
        # all distances equal: merges must follow smallest index pairs
        d = dm_from(np.ones((4, 4)) - np.eye(4))
        dend = hierarchical_cluster(d)
        assert dend.merges[0][:2] == (0, 1)

    def test_invalid_matrices(self):
        with pytest.raises(InvalidMatrixError):
            hierarchical_cluster(dm_from([[0, 1], [2, 0]]))
        with pytest.raises(InvalidMatrixError):
            hierarchical_cluster(dm_from([[0, -1], [-1, 0]]))

    def test_unknown_linkage(self):
        with pytest.raises(ValueError):
            hierarchical_cluster(dm_from([[0, 1], [1, 0]]), "ward")

    @given(st.integers(min_value=2, max_value=12), st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=100, deadline=None)
    def test_heights_monotone_on_random_metric_matrices(self, n, seed):
        rng = np.random.default_rng(seed)
        pts = rng.normal(size=(n, 3))
        d = np.linalg.norm(pts[:, None] - pts[None, :], axis=2)
        for linkage in ("average", "complete", "single"):
            dend = hierarchical_cluster(dm_from(d), linkage)
            heights = [m[2] for m in dend.merges]
            assert all(a <= b + 1e-12 for a, b in zip(heights, heights[1:]))


class TestCutClusters:
    def _dend(self):
        rng = np.random.default_rng(3)
        return hierarchical_cluster(planted_matrix(rng, n=8))

    def test_k_one(self):
        labels = cut_clusters(self._dend(), 1)
        assert set(labels.values()) == {0}

    def test_k_n_singletons(self):
        labels = cut_clusters(self._dend(), 8)
        assert sorted(labels.values()) == list(range(8))

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            cut_clusters(self._dend(), 0)
        with pytest.raises(ValueError):
            cut_clusters(self._dend(), 9)


class TestPCA:
    def test_collinear_data(self):
        vecs = [fv([t, 2 * t, -t], f"d{t}") for t in range(5)]
        proj = pca_project(vecs)
        assert proj.explained_variance[0] == pytest.approx(1.0, abs=1e-9)
        assert proj.explained_variance[1] == pytest.approx(0.0, abs=1e-9)

    def test_identical_documents_identical_coords(self):
        vecs = [fv([1, 2], "a"), fv([1, 2], "b"), fv([4, 0], "c"), fv([0, 5], "d")]
        proj = pca_project(vecs)
        assert np.allclose(proj.coords[0], proj.coords[1])

    def test_matches_dense_eigendecomposition(self):
        rng = np.random.default_rng(11)
        X = rng.normal(size=(30, 10))
        vecs = [fv(row, f"d{i}") for i, row in enumerate(X)]
        proj = pca_project(vecs)
        Xc = X - X.mean(axis=0)
        lams, V = np.linalg.eigh(Xc.T @ Xc)
        top = V[:, np.argsort(-lams)[:2]]
        for i in range(2):
            j = int(np.argmax(np.abs(top[:, i])))
            if top[j, i] < 0:
                top[:, i] = -top[:, i]
        assert np.allclose(proj.coords, Xc @ top, atol=1e-6)

    def test_components_orthonormal(self):
        rng = np.random.default_rng(5)
        vecs = [fv(row, f"d{i}") for i, row in enumerate(rng.normal(size=(20, 6)))]
        proj = pca_project(vecs)
        gram = proj.components.T @ proj.components
        assert np.allclose(gram, np.eye(2), atol=1e-8)

    def test_translation_invariance(self):
        rng = np.random.default_rng(9)
        X = rng.normal(size=(12, 5))
        shift = rng.normal(size=5)
        p1 = pca_project([fv(r, f"d{i}") for i, r in enumerate(X)])
        p2 = pca_project([fv(r + shift, f"d{i}") for i, r in enumerate(X)])
        assert np.allclose(p1.coords, p2.coords, atol=1e-8)

    def test_zero_mean_coordinates(self):
        rng = np.random.default_rng(2)
        vecs = [fv(r, f"d{i}") for i, r in enumerate(rng.normal(size=(9, 4)))]
        proj = pca_project(vecs)
        assert np.allclose(proj.coords.mean(axis=0), 0, atol=1e-10)

    def test_degenerate_data(self):
        vecs = [fv([1, 1], "a"), fv([1, 1], "b"), fv([1, 1], "c")]
        with pytest.raises(DegenerateDataError):
            pca_project(vecs)

    def test_too_few_vectors(self):
        with pytest.raises(ValueError):
            pca_project([fv([1, 2], "a"), fv([2, 1], "b")])


class TestExports:
    def _dend(self):
        d = dm_from([[0, 1, 10], [1, 0, 10], [10, 10, 0]], ("A", "B", "C"))
        return hierarchical_cluster(d)

    def test_newick_shape(self):
        nwk = to_newick(self._dend())
        assert nwk.endswith(";")
        assert nwk.count("(") == nwk.count(")") == 2
        for leaf in ("A", "B", "C"):
            assert leaf in nwk

    def test_merge_json_round_trip(self):
        payload = json.loads(to_merge_json(self._dend()))
        assert payload["leaves"] == ["A", "B", "C"]
        assert len(payload["merges"]) == 2
        assert payload["merges"][0]["height"] == 1.0

    def test_svg_contains_all_leaves(self):
        svg = dendrogram_svg(self._dend(), {"A": "p1", "B": "p1", "C": "p2"})
        assert svg.startswith("<svg")
        for leaf in ("A", "B", "C"):
            assert f">{leaf}</text>" in svg

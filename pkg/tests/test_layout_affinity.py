from __future__ import annotations

import numpy as np
import pytest

from promptcanvas.errors import ContractViolation
from promptcanvas.layout import affinity_propagation, median_pairwise

from .oracles import best_exemplar_subset, net_similarity, partition_from_exemplars


def similarity_matrix(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return -np.sum(diff * diff, axis=2)


def two_blobs(seed: int, n_per: int = 20, separation_factor: float = 10.0):
    rng = np.random.RandomState(seed)
    a = rng.randn(n_per, 2)
    b = rng.randn(n_per, 2)
    radius = float(np.mean(np.linalg.norm(np.vstack([a, b]), axis=1)))
    offset = np.array([separation_factor * radius, 0.0])
    return np.vstack([a, b + offset])


def acceptance_blob_instance(rng: np.random.RandomState) -> np.ndarray:
    """Two near-equal Gaussian blobs, centers 15-30 sigma apart, N in [4, 8]."""
    n = int(rng.randint(4, 9))
    first = n // 2
    sigma = 2.0
    factor = rng.uniform(15.0, 30.0)
    c0 = rng.rand(2) * 50
    angle = rng.uniform(0, 2 * np.pi)
    c1 = c0 + factor * sigma * np.array([np.cos(angle), np.sin(angle)])
    return np.vstack([c0 + rng.randn(first, 2) * sigma,
                      c1 + rng.randn(n - first, 2) * sigma])


class TestAffinityPropagation:
    def test_single_point(self):
        result = affinity_propagation(np.zeros((1, 1)))
        assert result.labels.tolist() == [0]
        assert result.exemplars.tolist() == [0]
        assert result.converged

    def test_two_blob_partition(self):
        points = two_blobs(seed=0)
        result = affinity_propagation(similarity_matrix(points))
        assert result.converged
        assert len(set(result.labels.tolist())) == 2
        first_half = set(result.labels[:20].tolist())
        second_half = set(result.labels[20:].tolist())
        assert len(first_half) == 1 and len(second_half) == 1
        assert first_half != second_half

    def test_exemplars_belong_to_their_clusters(self):
        points = two_blobs(seed=1)
        result = affinity_propagation(similarity_matrix(points))
        for k, exemplar in enumerate(result.exemplars):
            assert result.labels[exemplar] == k

    def test_small_instances_match_exhaustive_optimum(self):
        rng = np.random.RandomState(424242)
        for _ in range(20):
            points = acceptance_blob_instance(rng)
            s = similarity_matrix(points)
            preference = median_pairwise(s)
            best_net, best_set = best_exemplar_subset(s, preference)
            result = affinity_propagation(s, preference=preference)
            got = tuple(sorted(int(e) for e in result.exemplars))
            got_net = net_similarity(s, preference, got)
            assert (
                abs(got_net - best_net) < 1e-9
                or partition_from_exemplars(s, got)
                == partition_from_exemplars(s, best_set)
            ), f"net {got_net} vs optimum {best_net}"

    def test_six_point_two_cluster_exhaustive(self):
        # tiny version of the two-blob case, verified against enumeration
        points = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 0.8],
                           [40.0, 0.0], [41.0, 0.0], [40.5, 0.8]])
        s = similarity_matrix(points)
        preference = median_pairwise(s)
        _, best_set = best_exemplar_subset(s, preference)
        result = affinity_propagation(s, preference=preference)
        assert partition_from_exemplars(s, result.exemplars.tolist()) \
            == partition_from_exemplars(s, best_set)
        assert partition_from_exemplars(s, result.exemplars.tolist()) \
            == frozenset({frozenset({0, 1, 2}), frozenset({3, 4, 5})})

    def test_nonconvergence_degenerates_to_singletons(self):
        # two extremely tight far-apart cliques oscillate at damping 0.5;
        # the contract demands every point becomes its own flagged cluster
        rng = np.random.RandomState(7)
        points = np.vstack([rng.randn(20, 2), rng.randn(20, 2) + [100.0, 0.0]])
        result = affinity_propagation(similarity_matrix(points))
        if not result.converged:
            assert result.labels.tolist() == list(range(40))
            assert result.exemplars.tolist() == list(range(40))

    def test_seeded_determinism(self):
        points = two_blobs(seed=5, n_per=10)
        s = similarity_matrix(points)
        a = affinity_propagation(s, seed=3)
        b = affinity_propagation(s, seed=3)
        assert a.labels.tolist() == b.labels.tolist()
        assert a.exemplars.tolist() == b.exemplars.tolist()

    def test_rejects_non_square(self):
        with pytest.raises(ContractViolation):
            affinity_propagation(np.zeros((3, 4)))

    def test_median_pairwise_excludes_diagonal(self):
        s = np.array([[0.0, -2.0], [-2.0, 0.0]])
        assert median_pairwise(s) == -2.0

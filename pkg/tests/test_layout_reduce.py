from __future__ import annotations

import numpy as np
import pytest

from promptcanvas.embeddings import EmbeddingVector
from promptcanvas.errors import ContractViolation
from promptcanvas.layout import auto_perplexity, reduce_2d


def as_vectors(matrix: np.ndarray) -> list[EmbeddingVector]:
    return [EmbeddingVector(values=row, modality="image", provider_id="t")
            for row in matrix]


def three_blobs(seed: int = 7, sigma: float = 1.0):
    """3 x 20 points in D=64; inter-center distance is 10x the RMS radius."""
    rng = np.random.RandomState(seed)
    radius = sigma * np.sqrt(64)
    separation = 10.0 * radius
    centers = np.zeros((3, 64))
    centers[1, 0] = separation
    centers[2, 0] = separation / 2.0
    centers[2, 1] = separation * np.sqrt(3) / 2.0
    points = np.concatenate([c + rng.randn(20, 64) * sigma for c in centers])
    labels = np.repeat([0, 1, 2], 20)
    return points, labels


def neighbor_preservation(coords, labels) -> float:
    xy = np.asarray(coords)
    d2 = ((xy[:, None, :] - xy[None, :, :]) ** 2).sum(axis=2)
    np.fill_diagonal(d2, np.inf)
    nearest = d2.argmin(axis=1)
    return float((labels[nearest] == labels).mean())


class TestReduce2d:
    def test_empty(self):
        assert reduce_2d([], seed=0) == []

    def test_single_point_pinned_at_origin(self):
        vecs = as_vectors(np.random.RandomState(0).randn(1, 64))
        assert reduce_2d(vecs, seed=0) == [(0.0, 0.0)]

    def test_seeded_determinism_bit_identical(self):
        points, _ = three_blobs()
        vecs = as_vectors(points)
        first = reduce_2d(vecs, seed=3)
        second = reduce_2d(vecs, seed=3)
        assert first == second

    def test_different_seeds_differ(self):
        points, _ = three_blobs()
        vecs = as_vectors(points)
        assert reduce_2d(vecs, seed=3) != reduce_2d(vecs, seed=4)

    def test_three_blob_neighbor_preservation(self):
        points, labels = three_blobs()
        coords = reduce_2d(as_vectors(points), seed=3)
        assert neighbor_preservation(coords, labels) >= 0.90

    def test_all_outputs_finite(self):
        points, _ = three_blobs(seed=2)
        coords = reduce_2d(as_vectors(points), seed=0)
        assert np.all(np.isfinite(np.asarray(coords)))

    def test_two_points(self):
        vecs = as_vectors(np.random.RandomState(1).randn(2, 8))
        coords = reduce_2d(vecs, seed=0)
        assert len(coords) == 2
        assert np.all(np.isfinite(np.asarray(coords)))

    def test_duplicate_points_tolerated(self):
        row = np.random.RandomState(0).randn(8)
        vecs = as_vectors(np.stack([row, row, row + 1.0]))
        coords = reduce_2d(vecs, seed=0)
        assert np.all(np.isfinite(np.asarray(coords)))

    def test_mixed_dimensions_rejected(self):
        a = EmbeddingVector(values=np.ones(4), modality="image", provider_id="t")
        b = EmbeddingVector(values=np.ones(8), modality="image", provider_id="t")
        with pytest.raises(ContractViolation):
            reduce_2d([a, b], seed=0)


class TestAutoPerplexity:
    @pytest.mark.parametrize("n,expected", [
        (2, 1), (3, 1), (4, 1), (7, 2), (31, 10), (61, 20), (91, 30), (200, 30),
    ])
    def test_formula(self, n, expected):
        assert auto_perplexity(n) == expected

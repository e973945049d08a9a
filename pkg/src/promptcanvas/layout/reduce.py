"""Exact t-SNE, small-N flavor.

O(N^2) gradient descent is plenty for a canvas that holds at most a few
hundred images, and owning the loop buys seeded bit-reproducibility plus
fixed hyperparameters: 1000 iterations, early exaggeration 12 for the
first 250, perplexity auto-set to min(30, max(1, (N - 1) // 3)).
"""

from __future__ import annotations

import numpy as np

from ..embeddings import EmbeddingVector
from ..errors import ContractViolation

N_ITER = 1000
EXAGGERATION = 12.0
EXAGGERATION_ITERS = 250
LEARNING_RATE = 200.0
MOMENTUM_EARLY = 0.5
MOMENTUM_LATE = 0.8
MIN_GAIN = 0.01


def auto_perplexity(n: int) -> int:
    return min(30, max(1, (n - 1) // 3))


def _to_matrix(embeddings: list[EmbeddingVector]) -> np.ndarray:
    if not embeddings:
        return np.zeros((0, 0), dtype=np.float64)
    dim = embeddings[0].dimension
    for vec in embeddings:
        if vec.dimension != dim:
            raise ContractViolation("embeddings must share one dimension")
    matrix = np.stack([vec.values for vec in embeddings]).astype(np.float64)
    if not np.all(np.isfinite(matrix)):
        raise ContractViolation("non-finite embedding passed to reduce_2d")
    return matrix


def _squared_distances(x: np.ndarray) -> np.ndarray:
    sq = np.sum(x * x, axis=1)
    d2 = sq[:, None] - 2.0 * (x @ x.T) + sq[None, :]
    np.fill_diagonal(d2, 0.0)
    return np.maximum(d2, 0.0)


def _conditional_probabilities(d2: np.ndarray, perplexity: float) -> np.ndarray:
    """Per-row binary search for the bandwidth matching log(perplexity)."""
    n = d2.shape[0]
    target = np.log(perplexity)
    p = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        beta, beta_lo, beta_hi = 1.0, 0.0, np.inf
        row = d2[i].copy()
        row[i] = np.inf  # exclude self
        for _ in range(64):
            logits = -row * beta
            logits -= logits.max()
            expl = np.exp(logits)
            expl[i] = 0.0
            total = expl.sum()
            if total <= 0.0:
                # all mass collapsed; relax the bandwidth
                beta_hi = beta
                beta = beta / 2.0 if np.isinf(beta_lo) else (beta_lo + beta) / 2.0
                continue
            probs = expl / total
            nonzero = probs[probs > 0.0]
            entropy = -np.sum(nonzero * np.log(nonzero))
            if abs(entropy - target) < 1e-7:
                break
            if entropy > target:
                beta_lo = beta
                beta = beta * 2.0 if np.isinf(beta_hi) else (beta + beta_hi) / 2.0
            else:
                beta_hi = beta
                beta = beta / 2.0 if beta_lo == 0.0 else (beta_lo + beta) / 2.0
        logits = -row * beta
        finite = np.isfinite(logits)
        if finite.any():
            logits = logits - logits[finite].max()
        expl = np.exp(logits)
        expl[i] = 0.0
        total = expl.sum()
        if total <= 0.0:
            # degenerate row (identical points); fall back to uniform
            expl = np.ones(n)
            expl[i] = 0.0
            total = expl.sum()
        p[i] = expl / total
    return p


def reduce_2d(embeddings: list[EmbeddingVector], seed: int) -> list[tuple[float, float]]:
    """Project embeddings to 2D; deterministic for fixed (inputs, seed)."""
    n = len(embeddings)
    if n == 0:
        return []
    if n == 1:
        _to_matrix(embeddings)  # still validates finiteness
        return [(0.0, 0.0)]
    x = _to_matrix(embeddings)
    perplexity = auto_perplexity(n)
    cond = _conditional_probabilities(_squared_distances(x), perplexity)
    p = (cond + cond.T) / (2.0 * n)
    p = np.maximum(p, 1e-12)

    rng = np.random.RandomState(seed)
    y = rng.randn(n, 2) * 1e-4
    velocity = np.zeros_like(y)
    gains = np.ones_like(y)

    for it in range(N_ITER):
        p_eff = p * EXAGGERATION if it < EXAGGERATION_ITERS else p
        d2 = _squared_distances(y)
        inv = 1.0 / (1.0 + d2)
        np.fill_diagonal(inv, 0.0)
        q = np.maximum(inv / inv.sum(), 1e-12)

        pq = (p_eff - q) * inv
        grad = 4.0 * ((np.diag(pq.sum(axis=1)) - pq) @ y)

        momentum = MOMENTUM_EARLY if it < EXAGGERATION_ITERS else MOMENTUM_LATE
        same_sign = np.sign(grad) == np.sign(velocity)
        gains = np.where(same_sign, gains * 0.8, gains + 0.2)
        gains = np.maximum(gains, MIN_GAIN)
        velocity = momentum * velocity - LEARNING_RATE * gains * grad
        y = y + velocity
        y = y - y.mean(axis=0)

    if not np.all(np.isfinite(y)):
        raise ContractViolation("t-SNE diverged to non-finite coordinates")
    return [(float(px), float(py)) for px, py in y]

"""Affinity propagation clustering (message passing, dense numpy).

Exemplar-based clustering without a preset cluster count. Defaults match
the classic formulation: damping 0.5, up to 200 iterations, convergence
declared once the exemplar set is stable for 15 consecutive iterations.
A seeded degeneracy-breaking perturbation keeps runs reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ContractViolation

DAMPING = 0.5
MAX_ITER = 200
CONVERGENCE_WINDOW = 15


@dataclass
class AffinityResult:
    labels: np.ndarray        # cluster index per point, 0..K-1
    exemplars: np.ndarray     # point index of each cluster's exemplar
    converged: bool
    iterations: int


def median_pairwise(similarity: np.ndarray) -> float:
    """Median over off-diagonal entries (true pairs only)."""
    n = similarity.shape[0]
    if n < 2:
        return 0.0
    mask = ~np.eye(n, dtype=bool)
    return float(np.median(similarity[mask]))


def affinity_propagation(
    similarity: np.ndarray,
    preference: float | None = None,
    damping: float = DAMPING,
    max_iter: int = MAX_ITER,
    convergence_window: int = CONVERGENCE_WINDOW,
    seed: int = 0,
) -> AffinityResult:
    """Cluster a dense similarity matrix.

    preference defaults to the median pairwise similarity. On
    non-convergence every point becomes its own cluster (degenerate,
    converged=False).
    """
    s = np.asarray(similarity, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ContractViolation(f"similarity must be square, got {s.shape}")
    if not 0.5 <= damping < 1.0:
        raise ContractViolation("damping must be in [0.5, 1)")
    n = s.shape[0]
    if n == 0:
        return AffinityResult(np.zeros(0, dtype=int), np.zeros(0, dtype=int), True, 0)
    if n == 1:
        return AffinityResult(np.zeros(1, dtype=int), np.zeros(1, dtype=int), True, 0)

    if preference is None:
        preference = median_pairwise(s)
    s = s.copy()
    np.fill_diagonal(s, preference)

    # tiny seeded noise removes degeneracies without disturbing real structure
    rng = np.random.RandomState(seed)
    scale = np.finfo(np.float64).eps * np.abs(s) + np.finfo(np.float64).tiny * 100
    s += scale * rng.standard_normal((n, n))

    responsibility = np.zeros((n, n), dtype=np.float64)
    availability = np.zeros((n, n), dtype=np.float64)
    rows = np.arange(n)
    exemplar_history = np.zeros((convergence_window, n), dtype=bool)
    converged = False
    iterations = 0

    for it in range(max_iter):
        iterations = it + 1

        # responsibilities: r(i,k) = s(i,k) - max_{k' != k} (a(i,k') + s(i,k'))
        tmp = availability + s
        best_idx = np.argmax(tmp, axis=1)
        best = tmp[rows, best_idx]
        tmp[rows, best_idx] = -np.inf
        second = tmp.max(axis=1)
        r_new = s - best[:, None]
        r_new[rows, best_idx] = s[rows, best_idx] - second
        responsibility = damping * responsibility + (1.0 - damping) * r_new

        # availabilities: a(i,k) = min(0, r(k,k) + sum_{i' not in {i,k}} max(0, r(i',k)))
        r_pos = np.maximum(responsibility, 0.0)
        np.fill_diagonal(r_pos, responsibility.diagonal())
        a_new = r_pos.sum(axis=0)[None, :] - r_pos
        diag = a_new.diagonal().copy()
        a_new = np.minimum(a_new, 0.0)
        np.fill_diagonal(a_new, diag)
        availability = damping * availability + (1.0 - damping) * a_new

        is_exemplar = (responsibility.diagonal() + availability.diagonal()) > 0.0
        exemplar_history[it % convergence_window] = is_exemplar
        if it >= convergence_window - 1:
            stable = (exemplar_history == exemplar_history[0]).all()
            if stable and is_exemplar.any():
                converged = True
                break

    exemplars = np.flatnonzero(
        (responsibility.diagonal() + availability.diagonal()) > 0.0
    )
    if not converged or exemplars.size == 0:
        # degenerate: every point its own cluster
        return AffinityResult(
            labels=np.arange(n), exemplars=np.arange(n), converged=False,
            iterations=iterations,
        )

    labels = np.argmax(s[:, exemplars], axis=1)
    labels[exemplars] = np.arange(exemplars.size)

    # refine each exemplar to the member maximizing intra-cluster similarity
    for k in range(exemplars.size):
        members = np.flatnonzero(labels == k)
        best_member = members[np.argmax(s[np.ix_(members, members)].sum(axis=0))]
        exemplars[k] = best_member
    labels = np.argmax(s[:, exemplars], axis=1)
    labels[exemplars] = np.arange(exemplars.size)

    return AffinityResult(
        labels=labels, exemplars=exemplars, converged=True, iterations=iterations
    )

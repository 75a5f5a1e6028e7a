"""Shared fixtures and independent oracle helpers for the test suite."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

import repsc

# Regular-representation instances used across the suite: (n, k, d) with
# d/k representatives per cluster, chosen so the ring construction is
# feasible (even per-cluster degree needs an even cluster size).
REGULAR_INSTANCES = [
    (60, 2, 4),
    (60, 2, 12),
    (120, 2, 4),
    (240, 2, 12),
    (60, 3, 6),
    (120, 3, 18),
    (240, 3, 6),
    (240, 3, 18),
    (120, 4, 8),
    (120, 4, 24),
    (240, 4, 8),
    (240, 4, 24),
]

SWEEP_PROBS = dict(p=0.4, q=0.3, r=0.2, s=0.1)


def brute_force_mistake(truth: repsc.ClusterAssignment,
                        predicted: repsc.ClusterAssignment) -> float:
    """Reference value of the permutation-minimized indicator mismatch.

    Enumerates every k-permutation explicitly and counts differing one-hot
    entries, so it shares no code with the matching-based implementation.
    """
    theta = truth.onehot()
    theta_hat = predicted.onehot()
    best = np.inf
    for perm in itertools.permutations(range(truth.k)):
        j = np.zeros((truth.k, truth.k))
        j[list(perm), range(truth.k)] = 1.0
        mismatch = np.count_nonzero(theta - theta_hat @ j)
        best = min(best, mismatch)
    return best / truth.n


def same_partition(a: repsc.ClusterAssignment, b: repsc.ClusterAssignment) -> bool:
    """True when the two label vectors induce the same partition of nodes."""
    if a.n != b.n:
        return False
    mapping: dict[int, int] = {}
    reverse: dict[int, int] = {}
    for la, lb in zip(a.labels.tolist(), b.labels.tolist()):
        if mapping.setdefault(la, lb) != lb:
            return False
        if reverse.setdefault(lb, la) != la:
            return False
    return True


def random_orthonormal(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """Random n-by-k matrix with orthonormal columns."""
    q, _ = np.linalg.qr(rng.standard_normal((n, k)))
    return q[:, :k]


def random_assignment(rng: np.random.Generator, n: int, k: int) -> repsc.ClusterAssignment:
    """Uniform random labels conditioned on every cluster being non-empty."""
    while True:
        labels = rng.integers(0, k, size=n)
        if np.unique(labels).size == k:
            return repsc.ClusterAssignment(labels, k)


@pytest.fixture(scope="session")
def toy_instance():
    """The 24-node, 2-cluster, 6-regular walkthrough instance."""
    rep, truth = repsc.build_d_regular_rep_graph(24, 2, 6)
    params = repsc.RppParams(assignment=truth, rep_graph=rep, **SWEEP_PROBS)
    return rep, truth, params

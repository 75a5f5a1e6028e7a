"""Partition quality and agreement metrics.

Cut metrics are computed twice on purpose: once combinatorially from edge
weights and once as a Laplacian trace through the scaled indicator matrices.
The two routes must agree to near machine precision; a disagreement means a
bug in one of them, so it raises instead of silently returning either value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .constraint import build_indicator_h, build_indicator_t, node_balance, representation_residual
from .errors import EmptyClusterError, SizeMismatchError, ZeroVolumeClusterError
from .graphs import ClusterAssignment, Graph, as_adjacency

DUAL_FORM_TOL = 1e-9


def _cut_weights(adjacency: np.ndarray, assignment: ClusterAssignment) -> np.ndarray:
    """Weight leaving each cluster: sum of A_ij over i in C_k, j outside."""
    onehot = assignment.onehot()
    # Total degree of each cluster minus its internal weight (counted with
    # both orientations).
    per_cluster_degree = adjacency.sum(axis=1) @ onehot
    internal = np.einsum("ik,ij,jk->k", onehot, adjacency, onehot)
    return per_cluster_degree - internal


def _check_dual(name: str, combinatorial: float, trace_form: float) -> float:
    if abs(combinatorial - trace_form) > DUAL_FORM_TOL * (1.0 + abs(combinatorial)):
        raise AssertionError(
            f"{name}: combinatorial value {combinatorial!r} and trace value "
            f"{trace_form!r} disagree; this is a bug"
        )
    return combinatorial


def ratio_cut(graph, assignment: ClusterAssignment) -> float:
    """Sum over clusters of (weight leaving the cluster) / (cluster size).

    Also evaluates trace(H^T L H) with the size-scaled indicator H and
    asserts the two routes agree.
    """
    a = as_adjacency(graph)
    if a.shape[0] != assignment.n:
        raise SizeMismatchError(
            f"graph has {a.shape[0]} nodes, assignment has {assignment.n}"
        )
    sizes = assignment.sizes
    if np.any(sizes == 0):
        raise EmptyClusterError(f"cluster sizes must be positive, got {sizes.tolist()}")
    cuts = _cut_weights(a, assignment)
    combinatorial = float(np.sum(cuts / sizes))
    h = build_indicator_h(assignment)
    laplacian = np.diag(a.sum(axis=1)) - a
    trace_form = float(np.trace(h.T @ laplacian @ h))
    return _check_dual("ratio_cut", combinatorial, trace_form)


def normalized_cut(graph, assignment: ClusterAssignment) -> float:
    """Sum over clusters of (weight leaving the cluster) / (cluster volume).

    Raises ZeroVolumeClusterError when a cluster has no edge weight at all.
    Also evaluates trace(T^T L T) and asserts agreement.
    """
    a = as_adjacency(graph)
    if a.shape[0] != assignment.n:
        raise SizeMismatchError(
            f"graph has {a.shape[0]} nodes, assignment has {assignment.n}"
        )
    degrees = a.sum(axis=1)
    volumes = degrees @ assignment.onehot()
    if np.any(volumes <= 0.0):
        raise ZeroVolumeClusterError(f"cluster volumes must be positive, got {volumes.tolist()}")
    cuts = _cut_weights(a, assignment)
    combinatorial = float(np.sum(cuts / volumes))
    t = build_indicator_t(assignment, degrees)
    laplacian = np.diag(degrees) - a
    trace_form = float(np.trace(t.T @ laplacian @ t))
    return _check_dual("normalized_cut", combinatorial, trace_form)


def _matched_nodes(truth: ClusterAssignment, predicted: ClusterAssignment) -> int:
    if truth.n != predicted.n:
        raise SizeMismatchError(f"assignments cover {truth.n} and {predicted.n} nodes")
    if truth.k != predicted.k:
        raise SizeMismatchError(
            f"assignments use {truth.k} and {predicted.k} clusters; relabeling "
            "across different cluster counts is not defined here"
        )
    confusion = np.zeros((truth.k, truth.k), dtype=np.int64)
    np.add.at(confusion, (truth.labels, predicted.labels), 1)
    rows, cols = scipy.optimize.linear_sum_assignment(confusion, maximize=True)
    return int(confusion[rows, cols].sum())


def mistake_fraction(truth: ClusterAssignment, predicted: ClusterAssignment) -> float:
    """Minimum over cluster relabelings of the indicator-matrix mismatch.

    Counts differing entries between the two n-by-k membership matrices
    after the best permutation of predicted labels, divided by n. A node in
    the wrong cluster flips two entries, so the value lies in [0, 2]. The
    best permutation is found by maximum-weight matching on the confusion
    matrix, which minimizes the mismatch exactly.
    """
    matched = _matched_nodes(truth, predicted)
    return 2.0 * (truth.n - matched) / truth.n


def accuracy_nodes(truth: ClusterAssignment, predicted: ClusterAssignment) -> float:
    """Fraction of nodes placed correctly under the best cluster relabeling."""
    return _matched_nodes(truth, predicted) / truth.n


@dataclass(frozen=True)
class PartitionScore:
    """Bundle of quality and fairness numbers for one partition.

    ``ncut`` is None when some cluster has zero volume; ``balance_over_rcut``
    is None when the ratio cut is zero (nothing to divide by);
    ``mistake_fraction`` and ``accuracy`` are None when no reference
    partition was supplied.
    """

    rcut: float
    ncut: float | None
    mistake_fraction: float | None
    accuracy: float | None
    avg_balance: float
    min_balance: float
    max_representation_residual: float
    balance_over_rcut: float | None


def score_partition(graph, rep_graph: Graph, predicted: ClusterAssignment,
                    truth: ClusterAssignment | None = None) -> PartitionScore:
    """Evaluate a partition against a similarity graph and representation graph."""
    rcut = ratio_cut(graph, predicted)
    try:
        ncut = normalized_cut(graph, predicted)
    except ZeroVolumeClusterError:
        ncut = None
    balance = node_balance(rep_graph, predicted)
    residual = representation_residual(rep_graph, predicted)
    max_residual = float(np.abs(residual).max())
    if truth is not None:
        mistakes = mistake_fraction(truth, predicted)
        accuracy = accuracy_nodes(truth, predicted)
    else:
        mistakes = None
        accuracy = None
    balance_over_rcut = balance.average_balance / rcut if rcut > 0.0 else None
    return PartitionScore(
        rcut=rcut,
        ncut=ncut,
        mistake_fraction=mistakes,
        accuracy=accuracy,
        avg_balance=balance.average_balance,
        min_balance=balance.min_balance,
        max_representation_residual=max_residual,
        balance_over_rcut=balance_over_rcut,
    )

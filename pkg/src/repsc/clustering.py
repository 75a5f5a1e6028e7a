"""Spectral clustering, plain and representation-constrained.

Four algorithms share one skeleton: build a Laplacian, take the eigenvectors
at the bottom of its spectrum, and run k-means on the rows.

* usc: unnormalized Laplacian D - A.
* nsc: normalized Laplacian I - D^{-1/2} A D^{-1/2}, rows of the embedding
  scaled to unit length before k-means.
* urepsc / nrepsc: same objectives, but the optimization is restricted to
  the null space of the centered representation matrix R (I - 11^T/N), which
  forces the relaxed indicator vectors to respect proportional
  representation. The normalized variant whitens the restricted problem by
  the square root of Y^T D Y and, unlike nsc, applies no row scaling.
* urepsc_approx / nrepsc_approx: replace R by its best low-rank
  approximation first, so the constraint null space is guaranteed to be wide
  enough even when R has nearly full rank.

k-means is implemented here rather than borrowed so that seeding, restarts,
tie-breaking and empty-cluster repair are fully deterministic functions of
the config seed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    IsolatedNodeError,
    KTooLargeError,
    NotPositiveDefiniteError,
    NullSpaceTooSmallError,
    RankTooLargeError,
)
from .graphs import ClusterAssignment, as_adjacency
from .linalg import low_rank_approx, null_space_basis, sqrt_and_inv_sqrt, sym_eig

logger = logging.getLogger(__name__)

DEGENERATE_GAP_TOL = 1e-10


@dataclass(frozen=True)
class KMeansConfig:
    """Settings for the k-means backend.

    ``k`` may be left None when the caller (a spectral algorithm) supplies
    the cluster count itself.
    """

    k: int | None = None
    restarts: int = 10
    max_iters: int = 100
    rel_tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.k is not None and self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        if self.restarts < 1:
            raise ValueError(f"restarts must be at least 1, got {self.restarts}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters}")
        if not self.rel_tol > 0.0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")


@dataclass(frozen=True)
class ClusteringResult:
    """Output of a spectral clustering run.

    ``embedding`` holds the points actually fed to k-means (one row per
    node), ``spectrum_used`` the eigenvalues whose eigenvectors built that
    embedding, and ``warnings`` any numerical caveats such as a degenerate
    eigengap at the cut-off index.
    """

    assignment: ClusterAssignment
    embedding: np.ndarray
    kmeans_inertia: float
    spectrum_used: np.ndarray
    warnings: tuple[str, ...] = field(default_factory=tuple)


def _sq_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centroids[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def _seed_centroids(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: spread initial centroids by squared distance."""
    n = points.shape[0]
    centroids = np.empty((k, points.shape[1]))
    centroids[0] = points[rng.integers(n)]
    closest = _sq_distances(points, centroids[:1])[:, 0]
    for j in range(1, k):
        total = closest.sum()
        if total <= 0.0:
            # All remaining points coincide with a centroid; any choice ties.
            pick = int(rng.integers(n))
        else:
            pick = int(rng.choice(n, p=closest / total))
        centroids[j] = points[pick]
        closest = np.minimum(closest, _sq_distances(points, centroids[j:j + 1])[:, 0])
    return centroids


def _lloyd(points: np.ndarray, k: int, rng: np.random.Generator,
           max_iters: int, rel_tol: float) -> tuple[np.ndarray, np.ndarray, float]:
    n = points.shape[0]
    centroids = _seed_centroids(points, k, rng)
    prev_inertia = np.inf
    labels = np.zeros(n, dtype=np.int64)
    for _ in range(max_iters):
        d2 = _sq_distances(points, centroids)
        labels = d2.argmin(axis=1)
        assigned = d2[np.arange(n), labels]
        # Repair empty clusters: hand each one the point farthest from its
        # current centroid, one point per empty cluster.
        counts = np.bincount(labels, minlength=k)
        for empty in np.flatnonzero(counts == 0):
            far = int(assigned.argmax())
            labels[far] = empty
            assigned[far] = 0.0
        inertia = float(assigned.sum())
        for j in range(k):
            members = points[labels == j]
            if members.size:
                centroids[j] = members.mean(axis=0)
        if prev_inertia - inertia <= rel_tol * max(abs(prev_inertia), 1e-300):
            break
        prev_inertia = inertia
    d2 = _sq_distances(points, centroids)
    labels = d2.argmin(axis=1)
    counts = np.bincount(labels, minlength=k)
    assigned = d2[np.arange(n), labels]
    for empty in np.flatnonzero(counts == 0):
        far = int(assigned.argmax())
        labels[far] = empty
        assigned[far] = 0.0
    inertia = float(assigned.sum())
    return labels, centroids, inertia


def kmeans(points, cfg: KMeansConfig) -> tuple[np.ndarray, np.ndarray, float]:
    """Restarted Lloyd iterations with k-means++ seeding.

    Runs ``cfg.restarts`` independent seeded attempts and keeps the one with
    the lowest inertia (first winner on ties). Each restart draws its
    randomness from a generator keyed by (seed, restart index), so results
    do not depend on scheduling or on how many restarts run.

    Returns:
        (labels, centroids, inertia).

    Raises:
        KTooLargeError if cfg.k exceeds the number of points.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError(f"points must be 2-d, got shape {pts.shape}")
    if cfg.k is None:
        raise ValueError("cfg.k must be set for a direct kmeans call")
    k = cfg.k
    if k > pts.shape[0]:
        raise KTooLargeError(f"k={k} exceeds number of points {pts.shape[0]}")
    best: tuple[np.ndarray, np.ndarray, float] | None = None
    for restart in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, restart])
        labels, centroids, inertia = _lloyd(pts, k, rng, cfg.max_iters, cfg.rel_tol)
        if best is None or inertia < best[2]:
            best = (labels, centroids, inertia)
    return best


def _gap_warnings(eigenvalues: np.ndarray, k: int) -> tuple[str, ...]:
    if eigenvalues.shape[0] > k and eigenvalues[k] - eigenvalues[k - 1] < DEGENERATE_GAP_TOL:
        msg = (
            f"eigengap between positions {k - 1} and {k} is below {DEGENERATE_GAP_TOL:.0e}; "
            "the clustering subspace was resolved by index order and is not unique"
        )
        logger.warning(msg)
        return (msg,)
    return ()


def _cluster_rows(embedding: np.ndarray, k: int, cfg: KMeansConfig,
                  spectrum: np.ndarray, warnings: tuple[str, ...]) -> ClusteringResult:
    labels, _, inertia = kmeans(embedding, replace(cfg, k=k))
    assignment = ClusterAssignment(labels, k)
    return ClusteringResult(assignment, embedding, inertia, spectrum, warnings)


def _laplacian(adjacency: np.ndarray) -> np.ndarray:
    return np.diag(adjacency.sum(axis=1)) - adjacency


def usc(graph, k: int, cfg: KMeansConfig = KMeansConfig()) -> ClusteringResult:
    """Unnormalized spectral clustering.

    Accepts a Graph or any symmetric real matrix (so expected-case inputs
    can be clustered directly).
    """
    a = as_adjacency(graph)
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if k > a.shape[0]:
        raise KTooLargeError(f"k={k} exceeds node count {a.shape[0]}")
    decomposition = sym_eig(_laplacian(a))
    embedding = decomposition.eigenvectors[:, :k]
    warnings = _gap_warnings(decomposition.eigenvalues, k)
    return _cluster_rows(embedding, k, cfg, decomposition.eigenvalues[:k], warnings)


def nsc(graph, k: int, cfg: KMeansConfig = KMeansConfig()) -> ClusteringResult:
    """Normalized spectral clustering with unit-length row scaling.

    Raises IsolatedNodeError when some degree is not positive, since the
    normalized Laplacian is undefined there.
    """
    a = as_adjacency(graph)
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if k > a.shape[0]:
        raise KTooLargeError(f"k={k} exceeds node count {a.shape[0]}")
    degrees = a.sum(axis=1)
    if np.any(degrees <= 0.0):
        bad = np.flatnonzero(degrees <= 0.0)
        raise IsolatedNodeError(f"nodes with non-positive degree: {bad.tolist()}")
    inv_root = 1.0 / np.sqrt(degrees)
    norm_lap = np.eye(a.shape[0]) - inv_root[:, None] * a * inv_root[None, :]
    decomposition = sym_eig((norm_lap + norm_lap.T) / 2.0)
    embedding = decomposition.eigenvectors[:, :k].copy()
    norms = np.linalg.norm(embedding, axis=1)
    zero_rows = norms <= 1e-12
    if np.any(zero_rows):
        logger.warning(
            "nsc: %d embedding rows have zero norm and stay at the origin",
            int(zero_rows.sum()),
        )
    scale = np.where(zero_rows, 1.0, norms)
    embedding /= scale[:, None]
    warnings = _gap_warnings(decomposition.eigenvalues, k)
    return _cluster_rows(embedding, k, cfg, decomposition.eigenvalues[:k], warnings)


def constraint_null_basis(rep_graph_or_matrix) -> np.ndarray:
    """Orthonormal basis Y of the null space of R (I - 11^T/N).

    Every vector in this space, viewed as a relaxed cluster indicator,
    assigns each node's representatives to clusters in proportion to
    cluster sizes.
    """
    r = as_adjacency(rep_graph_or_matrix)
    n = r.shape[0]
    centered = r - np.outer(r.sum(axis=1), np.full(n, 1.0 / n))
    return null_space_basis(centered)


def urepsc(graph, rep_graph, k: int, cfg: KMeansConfig = KMeansConfig()) -> ClusteringResult:
    """Representation-constrained unnormalized spectral clustering.

    Minimizes the ratio-cut relaxation over span(Y) where Y spans the null
    space of the centered representation matrix, then clusters the rows of
    the re-expanded embedding Y Z.
    """
    a = as_adjacency(graph)
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    basis = constraint_null_basis(rep_graph)
    if basis.shape[0] != a.shape[0]:
        raise ValueError(
            f"graph has {a.shape[0]} nodes but representation matrix has {basis.shape[0]}"
        )
    if basis.shape[1] < k:
        raise NullSpaceTooSmallError(
            f"constraint null space has {basis.shape[1]} dimensions, need at least k={k}"
        )
    reduced = basis.T @ _laplacian(a) @ basis
    decomposition = sym_eig((reduced + reduced.T) / 2.0)
    embedding = basis @ decomposition.eigenvectors[:, :k]
    warnings = _gap_warnings(decomposition.eigenvalues, k)
    return _cluster_rows(embedding, k, cfg, decomposition.eigenvalues[:k], warnings)


def nrepsc(graph, rep_graph, k: int, cfg: KMeansConfig = KMeansConfig()) -> ClusteringResult:
    """Representation-constrained normalized spectral clustering.

    Works on Q^{-1} Y^T L Y Q^{-1} with Q the symmetric square root of
    Y^T D Y, so the volume-scaled indicator relaxation stays inside the
    constraint space. The embedding rows are fed to k-means as they are;
    no unit-length scaling is applied.
    """
    a = as_adjacency(graph)
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    degrees = a.sum(axis=1)
    if np.any(degrees <= 0.0):
        bad = np.flatnonzero(degrees <= 0.0)
        raise IsolatedNodeError(f"nodes with non-positive degree: {bad.tolist()}")
    basis = constraint_null_basis(rep_graph)
    if basis.shape[0] != a.shape[0]:
        raise ValueError(
            f"graph has {a.shape[0]} nodes but representation matrix has {basis.shape[0]}"
        )
    if basis.shape[1] < k:
        raise NullSpaceTooSmallError(
            f"constraint null space has {basis.shape[1]} dimensions, need at least k={k}"
        )
    restricted_degree = basis.T @ (degrees[:, None] * basis)
    try:
        _, inv_root = sqrt_and_inv_sqrt((restricted_degree + restricted_degree.T) / 2.0)
    except NotPositiveDefiniteError as exc:
        raise IsolatedNodeError(
            f"restricted degree matrix is numerically singular: {exc}"
        ) from exc
    reduced = inv_root @ basis.T @ _laplacian(a) @ basis @ inv_root
    decomposition = sym_eig((reduced + reduced.T) / 2.0)
    embedding = basis @ inv_root @ decomposition.eigenvectors[:, :k]
    warnings = _gap_warnings(decomposition.eigenvalues, k)
    return _cluster_rows(embedding, k, cfg, decomposition.eigenvalues[:k], warnings)


def _approx_rep(rep_graph, k: int, rank: int) -> np.ndarray:
    r = as_adjacency(rep_graph)
    n = r.shape[0]
    if rank < 1:
        raise ValueError(f"rank must be at least 1, got {rank}")
    if rank > n - k:
        raise RankTooLargeError(
            f"rank {rank} exceeds n - k = {n - k}; the constraint null space "
            "would be too small"
        )
    return low_rank_approx(r, rank)


def urepsc_approx(graph, rep_graph, k: int, rank: int,
                  cfg: KMeansConfig = KMeansConfig()) -> ClusteringResult:
    """urepsc on the best rank-``rank`` approximation of the representation matrix.

    Keeping rank <= n - k guarantees the approximated constraint leaves at
    least k null dimensions, at the price of only approximately satisfying
    the original constraint.
    """
    return urepsc(graph, _approx_rep(rep_graph, k, rank), k, cfg)


def nrepsc_approx(graph, rep_graph, k: int, rank: int,
                  cfg: KMeansConfig = KMeansConfig()) -> ClusteringResult:
    """nrepsc on the best low-rank approximation of the representation matrix."""
    return nrepsc(graph, _approx_rep(rep_graph, k, rank), k, cfg)

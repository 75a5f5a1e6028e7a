"""Dense symmetric linear algebra with deterministic output conventions.

All routines work on plain float64 numpy arrays and are meant for the
desk-scale problems this package targets (a few thousand nodes), so
everything is dense and exact up to LAPACK precision. Two conventions are
applied everywhere so that repeated runs and different call sites agree
bit for bit:

* eigenvalues (and singular values) are reported in ascending order;
* in every eigenvector / basis column, the first entry whose magnitude
  exceeds 1e-12 is made positive by flipping the column sign if needed.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import (
    EigenConvergenceError,
    NonSquareError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    RankTooLargeError,
)

SYMMETRY_ATOL = 1e-10
SIGN_THRESHOLD = 1e-12
RANK_REL_TOL = 1e-10


class EigenDecomposition(NamedTuple):
    """Full spectrum of a symmetric matrix.

    ``eigenvalues`` is ascending; column ``eigenvectors[:, i]`` belongs to
    ``eigenvalues[i]`` and carries the deterministic sign convention.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_float_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-d float64 array and reject non-finite entries."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def ensure_square(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    a = as_float_matrix(m, name)
    if a.shape[0] != a.shape[1]:
        raise NonSquareError(f"{name} must be square, got shape {a.shape}")
    return a


def ensure_symmetric(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    """Check symmetry up to SYMMETRY_ATOL and return the symmetrized copy.

    Asymmetry below the tolerance is treated as numerical noise and averaged
    away; anything larger is an error in the caller's data.
    """
    a = ensure_square(m, name)
    gap = np.max(np.abs(a - a.T)) if a.size else 0.0
    if gap > SYMMETRY_ATOL:
        raise NotSymmetricError(
            f"{name} is not symmetric: max|m - m^T| = {gap:.3e} exceeds {SYMMETRY_ATOL:.0e}"
        )
    return (a + a.T) / 2.0


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip column signs so the first entry above the threshold is positive."""
    v = vectors.copy()
    for j in range(v.shape[1]):
        col = v[:, j]
        idx = np.flatnonzero(np.abs(col) > SIGN_THRESHOLD)
        if idx.size and col[idx[0]] < 0:
            v[:, j] = -col
    return v


def sym_eig(m) -> EigenDecomposition:
    """Full eigendecomposition of a symmetric matrix.

    Args:
        m: square matrix, symmetric up to 1e-10 absolute tolerance.

    Returns:
        EigenDecomposition with ascending eigenvalues and sign-fixed
        orthonormal eigenvectors.

    Raises:
        NonSquareError, NotSymmetricError, EigenConvergenceError.
    """
    a = ensure_symmetric(m)
    try:
        values, vectors = scipy.linalg.eigh(a)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - backend failure
        raise EigenConvergenceError(str(exc)) from exc
    return EigenDecomposition(values, _fix_signs(vectors))


def null_space_basis(m, rel_tol: float = RANK_REL_TOL) -> np.ndarray:
    """Orthonormal basis of the (right) null space of a real matrix.

    Singular values at or below ``rel_tol * sigma_max * max(m.shape)`` count
    as zero. Columns are ordered by ascending singular value and carry the
    sign convention, so the basis is a deterministic function of the input.

    Args:
        m: real matrix, not necessarily symmetric.
        rel_tol: relative rank cutoff.

    Returns:
        Array of shape (m.shape[1], nullity). A full-rank input yields a
        matrix with zero columns, which is a valid (empty) basis.
    """
    a = as_float_matrix(m)
    try:
        _, sigma, vh = scipy.linalg.svd(a)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - backend failure
        raise EigenConvergenceError(str(exc)) from exc
    cutoff = rel_tol * (sigma[0] if sigma.size else 0.0) * max(a.shape)
    rank = int(np.sum(sigma > cutoff))
    # svd returns sigma descending, so the null rows are at the tail; reverse
    # them to get ascending singular value order.
    basis = vh[rank:][::-1].T
    return _fix_signs(basis)


def sqrt_and_inv_sqrt(m) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric square root and its inverse for a positive definite matrix.

    Args:
        m: symmetric matrix with smallest eigenvalue > 1e-12 * largest.

    Returns:
        (s, s_inv) with s @ s ~= m and s @ s_inv ~= identity, both symmetric.

    Raises:
        NotPositiveDefiniteError if the spectrum does not clear the cutoff.
    """
    values, vectors = sym_eig(m)
    largest = values[-1] if values.size else 0.0
    if largest <= 0.0 or values[0] <= 1e-12 * largest:
        raise NotPositiveDefiniteError(
            f"matrix is not positive definite: eigenvalue range [{values[0]:.3e}, {largest:.3e}]"
        )
    root = vectors @ np.diag(np.sqrt(values)) @ vectors.T
    inv_root = vectors @ np.diag(1.0 / np.sqrt(values)) @ vectors.T
    return (root + root.T) / 2.0, (inv_root + inv_root.T) / 2.0


def low_rank_approx(m, rank: int) -> np.ndarray:
    """Best approximation of a symmetric matrix by the given number of eigenpairs.

    Keeps the ``rank`` eigenpairs of largest absolute eigenvalue (ties broken
    by ascending eigenvalue position, which makes the choice deterministic)
    and discards the rest. The eigenvectors themselves are kept as-is, so the
    result is generally not a 0/1 matrix even when the input is.

    Args:
        m: symmetric matrix.
        rank: number of eigenpairs to keep, 1 <= rank <= m.shape[0].

    Returns:
        The reconstructed symmetric matrix of the requested rank (or less,
        when the spectrum itself has fewer nonzero eigenvalues).

    Raises:
        RankTooLargeError if rank exceeds the dimension; ValueError if rank < 1.
    """
    values, vectors = sym_eig(m)
    n = values.shape[0]
    if rank < 1:
        raise ValueError(f"rank must be at least 1, got {rank}")
    if rank > n:
        raise RankTooLargeError(f"rank {rank} exceeds matrix dimension {n}")
    order = np.argsort(-np.abs(values), kind="stable")
    keep = order[:rank]
    kept_values = values[keep]
    kept_vectors = vectors[:, keep]
    approx = (kept_vectors * kept_values) @ kept_vectors.T
    return (approx + approx.T) / 2.0

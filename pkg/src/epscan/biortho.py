"""Biorthogonal eigensystems of dense complex (non-Hermitian) matrices.

A non-Hermitian matrix has distinct left and right eigenvectors.  Everything
downstream (projectors, perturbation theory, level tracking) relies on the
biorthonormal pairing

    <L_i|R_j> = delta_ij,        sum_i |R_i><L_i| = 1,

so this module wraps the dense LAPACK solver and repairs what it does not
guarantee: consistent left/right pairing inside degenerate clusters, and a
common normalization.  Right eigenvectors are returned with unit Euclidean
norm; the left vectors absorb the binormalization factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DefectiveMatrix, DimensionMismatch, NonConvergence

__all__ = [
    "BiorthogonalEigensystem",
    "eigendecompose",
    "binormalize",
    "cluster_quasi_degenerate",
]

#: Overlap |<L|R>| (unit-normalized vectors) below which a pair is treated as
#: defective, i.e. the matrix is within numerical reach of an exceptional point.
DEFAULT_COND_TOL = 1e-12

#: Eigenvalue spacing (relative to the spectral scale) below which two levels
#: are treated as one degenerate cluster during left/right pairing.
_CLUSTER_RTOL = 1e-8


@dataclass(frozen=True)
class BiorthogonalEigensystem:
    """Eigenvalues with paired right (columns) and left (rows) eigenvectors.

    Attributes
    ----------
    values : (n,) complex ndarray, sorted by (Re, Im) lexicographically.
    rights : (n, n) complex ndarray; column ``i`` is ``|R_i>``, unit norm.
    lefts : (n, n) complex ndarray; row ``i`` is ``<L_i|`` with
        ``lefts[i] @ rights[:, i] == 1``.
    residual_norm : max over levels of ``||M @ R_i - E_i R_i||_2``.
    """

    values: np.ndarray
    rights: np.ndarray
    lefts: np.ndarray
    residual_norm: float

    @property
    def dim(self) -> int:
        return self.values.size

    def overlap_matrix(self) -> np.ndarray:
        """The matrix <L_i|R_j>; identity up to the validated tolerance."""
        return self.lefts @ self.rights

    def completeness_defect(self) -> float:
        """Frobenius deviation of sum_i |R_i><L_i| from the identity."""
        resolution = self.rights @ self.lefts
        return float(np.linalg.norm(resolution - np.eye(self.dim)))


def _as_square(matrix) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    return m


def sort_order(values: np.ndarray) -> np.ndarray:
    """Indices that sort eigenvalues by (Re, Im), lexicographically, stably."""
    v = np.asarray(values)
    return np.lexsort((v.imag, v.real))


def _greedy_pair(rights: np.ndarray, lefts: np.ndarray) -> np.ndarray:
    """Reorder left rows so row i pairs with right column i by max |<L|R>|."""
    overlap = np.abs(lefts @ rights)
    n = overlap.shape[0]
    perm = np.full(n, -1)
    left_used = np.zeros(n, dtype=bool)
    for flat in np.argsort(overlap, axis=None)[::-1]:
        i, j = divmod(int(flat), n)
        if left_used[i] or perm[j] >= 0:
            continue
        perm[j] = i
        left_used[i] = True
        if np.all(perm >= 0):
            break
    return lefts[perm]


def _repair_degenerate_clusters(
    values: np.ndarray, rights: np.ndarray, lefts: np.ndarray
) -> np.ndarray:
    """Enforce <L_i|R_j> = delta_ij inside (near-)degenerate clusters.

    The LAPACK left and right sets each span a degenerate eigenspace but are
    not mutually biorthogonal within it; solving the small overlap block
    restores the pairing exactly.  A singular block means the cluster is
    defective (a genuine EP), not merely degenerate.
    """
    scale = max(1.0, float(np.max(np.abs(values))))
    tol = _CLUSTER_RTOL * scale
    lefts = lefts.copy()
    start = 0
    n = values.size
    for stop in range(1, n + 1):
        if stop < n and abs(values[stop] - values[stop - 1]) < tol:
            continue
        if stop - start > 1:
            block = lefts[start:stop] @ rights[:, start:stop]
            try:
                lefts[start:stop] = np.linalg.solve(block, lefts[start:stop])
            except np.linalg.LinAlgError as exc:
                raise DefectiveMatrix(
                    "degenerate eigenvalue cluster has singular left/right "
                    f"overlap near E = {values[start]:.6g}"
                ) from exc
        start = stop
    return lefts


def binormalize(rights, lefts, cond_tol: float = DEFAULT_COND_TOL):
    """Rescale paired eigenvectors to <L_i|R_i> = 1 with unit-norm rights.

    Parameters
    ----------
    rights : (n, k) array or sequence of k vectors (columns).
    lefts : (k, n) array or sequence of k covectors (rows), already paired
        index-by-index with ``rights``.
    cond_tol : overlap floor below which the pair counts as defective.

    Returns
    -------
    (rights, lefts) : normalized copies.  The full magnitude of the
        binormalization factor sits on the left vectors, so near an EP the
        left norms diverge while the rights stay O(1).
    """
    if isinstance(rights, np.ndarray):
        r = np.array(rights, dtype=complex)
    else:
        r = np.column_stack([np.asarray(v, dtype=complex) for v in rights])
    if isinstance(lefts, np.ndarray):
        l = np.array(lefts, dtype=complex)
    else:
        l = np.vstack([np.asarray(v, dtype=complex) for v in lefts])
    if r.ndim != 2 or l.ndim != 2 or r.shape[1] != l.shape[0] or r.shape[0] != l.shape[1]:
        raise DimensionMismatch(
            f"rights {r.shape} and lefts {l.shape} are not a paired set"
        )
    rnorm = np.linalg.norm(r, axis=0)
    lnorm = np.linalg.norm(l, axis=1)
    if np.any(rnorm == 0.0) or np.any(lnorm == 0.0):
        raise DefectiveMatrix("zero eigenvector passed to binormalize")
    # conditioning check on unit-normalized pairs
    unit_overlap = np.abs(np.einsum("ij,ji->i", l / lnorm[:, None], r / rnorm))
    if np.min(unit_overlap) < cond_tol:
        raise DefectiveMatrix(
            f"left/right overlap {np.min(unit_overlap):.3e} below {cond_tol:.1e}; "
            "matrix is numerically defective (exceptional point)"
        )
    r = r / rnorm
    d = np.einsum("ij,ji->i", l, r)
    return r, l / d[:, None]


def eigendecompose(matrix, tol: float = 1e-10) -> BiorthogonalEigensystem:
    """Full biorthogonal eigendecomposition of a dense complex matrix.

    Eigenvalues are sorted by (Re, Im); left rows are paired to right columns
    by maximal overlap, re-biorthogonalized inside degenerate clusters, and
    binormalized.  The returned system satisfies

        max_ij |<L_i|R_j> - delta_ij| < tol,
        || sum_i |R_i><L_i| - 1 ||_F  < tol,

    or :class:`DefectiveMatrix` is raised (the matrix is within numerical
    reach of an exceptional point).

    Raises
    ------
    NonConvergence : the QR iteration failed.
    DefectiveMatrix : binormalization impossible at this conditioning.
    DimensionMismatch : input is not square.
    """
    m = _as_square(matrix)
    try:
        w, vl, vr = scipy.linalg.eig(m, left=True, right=True)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NonConvergence("dense QR eigensolver did not converge") from exc
    order = sort_order(w)
    values = w[order]
    rights = vr[:, order]
    lefts = vl.conj().T[order]          # row i satisfies <L_i| M = w_i <L_i|
    lefts = _greedy_pair(rights, lefts)
    lefts = _repair_degenerate_clusters(values, rights, lefts)
    rights, lefts = binormalize(rights, lefts)

    n = values.size
    overlap_defect = float(np.max(np.abs(lefts @ rights - np.eye(n))))
    completeness = float(np.linalg.norm(rights @ lefts - np.eye(n)))
    scale = max(1.0, float(np.linalg.norm(m, 2)))
    if overlap_defect > tol * scale or completeness > tol * scale:
        raise DefectiveMatrix(
            f"biorthonormality defect {overlap_defect:.3e} / completeness "
            f"defect {completeness:.3e} exceed tol {tol:.1e} (near an EP)"
        )
    residual = float(np.max(np.linalg.norm(m @ rights - rights * values, axis=0)))
    return BiorthogonalEigensystem(values, rights, lefts, residual)


def cluster_quasi_degenerate(values, gap: float) -> list[list[int]]:
    """Partition level indices into groups separated by real-part gaps >= gap.

    Single-linkage on the (Re, Im)-sorted sequence: consecutive levels whose
    real parts differ by less than ``gap`` share a group.  Returns original
    indices, groups ordered by ascending real part.
    """
    if not gap > 0:
        raise ValueError(f"gap must be positive, got {gap}")
    v = np.asarray(values, dtype=complex)
    if v.size == 0:
        return []
    order = sort_order(v)
    groups: list[list[int]] = [[int(order[0])]]
    for prev, cur in zip(order[:-1], order[1:]):
        if v[cur].real - v[prev].real < gap:
            groups[-1].append(int(cur))
        else:
            groups.append([int(cur)])
    return groups

"""Exact Gaussian elimination over GF(2^k) on numpy integer matrices."""

from __future__ import annotations

import numpy as np

from .ff import FieldCtx


def _eliminate(F: FieldCtx, A: np.ndarray, ncols: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``A`` restricted to pivoting in the first
    ``ncols`` columns.  Returns (matrix, pivot columns)."""
    A = np.array(A, dtype=np.int64, copy=True)
    rows = A.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        lead = int(A[r, c])
        if lead != 1:
            A[r] = F.scale_array(F.inv(lead), A[r])
        factors = A[:, c].copy()
        factors[r] = 0
        hit = np.nonzero(factors)[0]
        if hit.size:
            A[hit] ^= F.mul_arrays(factors[hit][:, None], A[r][None, :])
        pivots.append(c)
        r += 1
    return A, pivots


def rank(F: FieldCtx, A: np.ndarray) -> int:
    A = np.asarray(A, dtype=np.int64)
    return len(_eliminate(F, A, A.shape[1])[1])


def solve(F: FieldCtx, A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Unique solution of A x = b for square A, or None when A is singular."""
    A = np.asarray(A, dtype=np.int64)
    size = A.shape[0]
    aug = np.concatenate([A, np.asarray(b, dtype=np.int64).reshape(size, -1)], axis=1)
    R, pivots = _eliminate(F, aug, size)
    if len(pivots) < size:
        return None
    out = R[:, size:]
    return out[:, 0] if np.ndim(b) == 1 else out

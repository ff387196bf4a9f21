"""Gaussian elimination over Z/pZ: rank and a deterministic kernel vector.

Pivoting is deterministic: columns are scanned left to right and the pivot
row is the first row (in current order) with a nonzero entry.  numpy int64 is
used whenever p**2 fits; object arrays of Python ints otherwise.
"""

import numpy as np

from .poly import int64_safe


def _as_matrix(rows, p):
    dtype = np.int64 if int64_safe(p, 2) else object
    M = np.array(rows, dtype=dtype)
    if M.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return M % p


def row_echelon(M, p):
    """Reduce ``M`` (modified in place) to row echelon form with unit pivots.

    Returns the list of pivot columns; pivot i sits in row i.
    """
    nrows, ncols = M.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(M[r:, c])
        if not len(nz):
            continue
        k = r + int(nz[0])
        if k != r:
            M[[r, k]] = M[[k, r]]
        inv = pow(int(M[r, c]), -1, p)
        M[r, c:] = M[r, c:] * inv % p
        below = np.flatnonzero(M[r + 1 :, c]) + r + 1
        if len(below):
            factors = M[below, c].reshape(-1, 1)
            M[below, c:] = (M[below, c:] - factors * M[r, c:]) % p
        pivots.append(c)
        r += 1
    return pivots


def rank_mod_p(rows, p) -> int:
    if not len(rows):
        return 0
    M = _as_matrix(rows, p)
    return len(row_echelon(M, p))


def kernel_vector(rows, p, ncols=None):
    """A nonzero vector v with M v = 0 (mod p), or None if the kernel is trivial.

    The first free column is pinned to 1, every other free column to 0, and the
    pivot variables follow by back-substitution.
    """
    if ncols is None:
        ncols = len(rows[0]) if len(rows) else 0
    if not len(rows):
        if ncols == 0:
            return None
        v = [0] * ncols
        v[0] = 1
        return v
    M = _as_matrix(rows, p)
    if M.shape[1] != ncols:
        raise ValueError("row length does not match ncols")
    pivots = row_echelon(M, p)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    if not free:
        return None
    if int64_safe(p, ncols):
        vec = np.zeros(ncols, dtype=np.int64)
        vec[free[0]] = 1
        for i in range(len(pivots) - 1, -1, -1):
            c = pivots[i]
            vec[c] = (-int(M[i, c + 1 :] @ vec[c + 1 :])) % p
        return vec.tolist()
    v = [0] * ncols
    v[free[0]] = 1
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        row = M[i]
        acc = sum(int(row[j]) * v[j] for j in range(c + 1, ncols) if v[j])
        v[c] = (-acc) % p
    return v


def mat_vec(rows, v, p):
    """M v mod p using exact Python integers (used for verification)."""
    return [sum(int(a) * int(b) for a, b in zip(row, v)) % p for row in rows]

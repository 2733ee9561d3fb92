"""Independent oracles used by the tests.

These stay deliberately separate from the package implementations they
check: the space dimension comes from the nullity of an explicitly built
constraint matrix, never from the closed formula under test.
"""

import numpy as np

from syspencils import Realization, block_shift_sum


def shifted_sum_pattern(v, w, R: Realization) -> np.ndarray:
    """Target of the block column shifted sum for ansatz pair (v, w)."""
    m, n, k, r = R.m, R.n, R.k, R.r
    K_A = np.hstack([R.A.coefficient(j) for j in range(m, -1, -1)])
    K_D = np.hstack([R.D.coefficient(j) for j in range(k, -1, -1)])
    top = np.zeros((m * n, (m + 1) * n + (k + 1) * r), dtype=complex)
    bot = np.zeros((k * r, (m + 1) * n + (k + 1) * r), dtype=complex)
    top[:, : (m + 1) * n] = np.kron(np.reshape(v, (-1, 1)), K_A)
    top[:, -r:] = -np.kron(np.reshape(v, (-1, 1)), R.B)
    bot[:, (m + 1) * n :] = np.kron(np.reshape(w, (-1, 1)), K_D)
    bot[:, (m + 1) * n - n : (m + 1) * n] = np.kron(np.reshape(w, (-1, 1)), R.C)
    return np.vstack([top, bot])


def constraint_nullity(R: Realization) -> int:
    """Dimension of the first ansatz space via an explicit constraint matrix.

    Unknowns are (X, Y, v, w); constraints force the off-diagonal quadrants
    of X to vanish and the block column shifted sum of (X, Y) to equal the
    (v, w) pattern.  The ansatz pair is determined by (X, Y) whenever the
    coefficient rows are nonzero, so the nullity equals the space dimension.
    """
    dims = R.dims
    N = dims.size
    m, n, k, r = dims.m, dims.n, dims.k, dims.r
    t = dims.top

    def apply(X, Y, v, w):
        off = np.concatenate([X[:t, t:].ravel(), X[t:, :t].ravel()])
        dev = block_shift_sum(X, Y, dims) - shifted_sum_pattern(v, w, R)
        return np.concatenate([off, dev.ravel()])

    zero_X = np.zeros((N, N), dtype=complex)
    zero_v = np.zeros(m, dtype=complex)
    zero_w = np.zeros(k, dtype=complex)
    cols = []
    for i in range(N):
        for j in range(N):
            E = np.zeros((N, N), dtype=complex)
            E[i, j] = 1.0
            cols.append(apply(E, zero_X, zero_v, zero_w))
    for i in range(N):
        for j in range(N):
            E = np.zeros((N, N), dtype=complex)
            E[i, j] = 1.0
            cols.append(apply(zero_X, E, zero_v, zero_w))
    for i in range(m):
        e = np.zeros(m, dtype=complex)
        e[i] = 1.0
        cols.append(apply(zero_X, zero_X, e, zero_w))
    for i in range(k):
        e = np.zeros(k, dtype=complex)
        e[i] = 1.0
        cols.append(apply(zero_X, zero_X, zero_v, e))
    M = np.column_stack(cols)
    sv = np.linalg.svd(M, compute_uv=False)
    rank = int(np.sum(sv > max(M.shape) * np.finfo(float).eps * sv[0]))
    return M.shape[1] - rank

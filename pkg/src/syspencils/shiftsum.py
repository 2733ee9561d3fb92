"""Shifted sums, the block column shifted sum and block transposition.

These are the combinatorial operations that turn the ansatz identities of
the pencil spaces into linear conditions on the pencil coefficients
(X, Y).  The column shifted sum of two block matrices pads each operand
with one zero block column and adds them with an offset of one block; the
row shifted sum is the transpose analogue.  The four-quadrant version
operates on matrices partitioned according to a :class:`BlockDims`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BlockDims
from .errors import DimensionError

__all__ = [
    "BlockMatrix",
    "col_shift_sum",
    "row_shift_sum",
    "block_shift_sum",
    "block_transpose",
    "is_block_symmetric",
]


@dataclass(frozen=True)
class BlockMatrix:
    """A dense matrix with a uniform block grid interpretation."""

    data: np.ndarray
    block_rows: int
    block_cols: int
    blk_r: int
    blk_c: int

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        object.__setattr__(self, "data", data)
        expect = (self.block_rows * self.blk_r, self.block_cols * self.blk_c)
        if data.shape != expect:
            raise DimensionError(f"block grid implies shape {expect}, data is {data.shape}")


def _shift_cols(X: np.ndarray, Y: np.ndarray, width: int) -> np.ndarray:
    # [X | 0] + [0 | Y], padding one block column of the given width
    if X.shape != Y.shape:
        raise DimensionError(f"operands differ in shape: {X.shape} vs {Y.shape}")
    rows, cols = X.shape
    if cols % width:
        raise DimensionError(f"column count {cols} not a multiple of block width {width}")
    out = np.zeros((rows, cols + width), dtype=complex)
    out[:, :cols] += X
    out[:, width:] += Y
    return out


def _shift_rows(X: np.ndarray, Y: np.ndarray, height: int) -> np.ndarray:
    if X.shape != Y.shape:
        raise DimensionError(f"operands differ in shape: {X.shape} vs {Y.shape}")
    rows, cols = X.shape
    if rows % height:
        raise DimensionError(f"row count {rows} not a multiple of block height {height}")
    out = np.zeros((rows + height, cols), dtype=complex)
    out[:rows, :] += X
    out[height:, :] += Y
    return out


def _check_same_grid(X: BlockMatrix, Y: BlockMatrix):
    if (X.block_rows, X.block_cols, X.blk_r, X.blk_c) != (
        Y.block_rows,
        Y.block_cols,
        Y.blk_r,
        Y.blk_c,
    ):
        raise DimensionError("block grids of the operands disagree")


def col_shift_sum(X: BlockMatrix, Y: BlockMatrix) -> np.ndarray:
    """Column shifted sum: ``[X | 0] + [0 | Y]`` with one block column of padding."""
    _check_same_grid(X, Y)
    return _shift_cols(X.data, Y.data, X.blk_c)


def row_shift_sum(X: BlockMatrix, Y: BlockMatrix) -> np.ndarray:
    """Row shifted sum: ``[X ; 0] + [0 ; Y]`` with one block row of padding."""
    _check_same_grid(X, Y)
    return _shift_rows(X.data, Y.data, X.blk_r)


def _quadrants(M: np.ndarray, dims: BlockDims):
    t = dims.top
    return M[:t, :t], M[:t, t:], M[t:, :t], M[t:, t:]


def block_shift_sum(X: np.ndarray, Y: np.ndarray, dims: BlockDims) -> np.ndarray:
    """Four-quadrant column shifted sum of (mn+kr)-sized matrices.

    Each quadrant is shifted by its own column block size: the left
    quadrants by n, the right quadrants by r.  The result is
    (mn+kr) x ((m+1)n + (k+1)r), partitioned the same way.
    """
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    s = dims.size
    if X.shape != (s, s) or Y.shape != (s, s):
        raise DimensionError(f"expected {s}x{s} operands for dims {dims}")
    X11, X12, X21, X22 = _quadrants(X, dims)
    Y11, Y12, Y21, Y22 = _quadrants(Y, dims)
    n, r = dims.n, dims.r
    top = np.hstack([_shift_cols(X11, Y11, n), _shift_cols(X12, Y12, r)])
    bot = np.hstack([_shift_cols(X21, Y21, n), _shift_cols(X22, Y22, r)])
    return np.vstack([top, bot])


def _grid_transpose(M: np.ndarray, grid: int, blk: int) -> np.ndarray:
    # move blocks to transposed grid positions without transposing contents
    out = np.empty_like(M)
    for i in range(grid):
        for j in range(grid):
            out[i * blk : (i + 1) * blk, j * blk : (j + 1) * blk] = M[
                j * blk : (j + 1) * blk, i * blk : (i + 1) * blk
            ]
    return out


def _kron_factor(Q: np.ndarray, grid_shape, blk_shape, rtol: float = 1e-13):
    """Split ``Q = G kron X`` into grid pattern G and block content X.

    Uses the dominant factor of the Kronecker rearrangement; exact when the
    quadrant has grid-rank one (the only case the block transpose of a
    system pencil is defined for).  The pattern is normalized to unit
    Frobenius norm with its largest entry real positive, so repeated
    factorizations are reproducible.  A zero quadrant yields zero factors.
    """
    gr, gc = grid_shape
    br, bc = blk_shape
    R = np.empty((gr * gc, br * bc), dtype=complex)
    for i in range(gr):
        for j in range(gc):
            R[i * gc + j, :] = Q[i * br : (i + 1) * br, j * bc : (j + 1) * bc].ravel()
    scale = np.linalg.norm(R)
    if scale == 0.0:
        return np.zeros((gr, gc), dtype=complex), np.zeros((br, bc), dtype=complex)
    U, sv, Vh = np.linalg.svd(R, full_matrices=False)
    g = U[:, 0]
    idx = int(np.argmax(np.abs(g)))
    phase = g[idx] / abs(g[idx])
    g = g / phase
    # rank-1: R[i, :] = sv[0] * u_i * Vh[0, :], so the content row is
    # sv[0] * Vh[0, :] rescaled by the extracted phase
    content = sv[0] * phase * Vh[0, :]
    return g.reshape(gr, gc), content.reshape(br, bc)


def _kron_expand(G: np.ndarray, X: np.ndarray) -> np.ndarray:
    return np.kron(G, X)


def block_transpose(A: np.ndarray, dims: BlockDims) -> np.ndarray:
    """Block transpose of a four-quadrant system pencil coefficient.

    The diagonal quadrants have their grids transposed in place (blocks
    move by grid index, contents stay as they are).  The off-diagonal
    quadrants carry a grid pattern tensor a fixed content, ``u s^T kron X``
    on top and ``z v^T kron Y`` below; the block transpose swaps the grid
    patterns (transposed) while each quadrant keeps its own content:
    ``v z^T kron X`` on top and ``s u^T kron Y`` below.  The operation is
    an involution on matrices whose off-diagonal quadrants have grid rank
    one, which is the class it is defined for.
    """
    A = np.asarray(A, dtype=complex)
    s = dims.size
    if A.shape != (s, s):
        raise DimensionError(f"expected {s}x{s} matrix for dims {dims}")
    m, n, k, r = dims.m, dims.n, dims.k, dims.r
    TL, TR, BL, BR = _quadrants(A, dims)
    out = np.zeros_like(A)
    t = dims.top
    out[:t, :t] = _grid_transpose(TL, m, n)
    out[t:, t:] = _grid_transpose(BR, k, r)
    g_tr, x_tr = _kron_factor(TR, (m, k), (n, r))
    g_bl, y_bl = _kron_factor(BL, (k, m), (r, n))
    # A zero quadrant has no pattern of its own; inherit the partner's so
    # the swap stays involutive and pencils with B = 0 or C = 0 keep their
    # block symmetry.
    if not np.any(g_tr) and np.any(g_bl):
        g_tr = g_bl.T
    if not np.any(g_bl) and np.any(g_tr):
        g_bl = g_tr.T
    out[:t, t:] = _kron_expand(g_bl.T, x_tr)
    out[t:, :t] = _kron_expand(g_tr.T, y_bl)
    return out


def is_block_symmetric(A: np.ndarray, dims: BlockDims, tol: float | None = None) -> bool:
    """True when ``A`` equals its block transpose in max norm, to tolerance."""
    A = np.asarray(A, dtype=complex)
    if tol is None:
        amax = float(np.max(np.abs(A))) if A.size else 0.0
        tol = 1e-10 * max(1.0, amax)
    return float(np.max(np.abs(A - block_transpose(A, dims)))) <= tol

"""Matrix polynomials, state-space realizations and transfer functions.

The central objects are ``MatrixPolynomial`` (a dense list of complex
coefficient matrices) and ``Realization``, the quadruple

    A(lambda): n x n polynomial of degree m >= 1,
    B:         n x r constant,
    C:         r x n constant,
    D(lambda): r x r polynomial of degree k >= 1,

from which the system matrix ``S(lambda) = [[A, -B], [C, D]]`` and the
transfer function ``G(lambda) = C A(lambda)^{-1} B + D(lambda)`` derive.
Degrees are structural: trailing zero coefficients are kept as given.
All types are immutable values and all operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, PoleError

__all__ = [
    "MatrixPolynomial",
    "Realization",
    "BlockDims",
    "eval_polymat",
    "lambda_vector",
    "padded_identity",
    "build_system_matrix",
    "eval_transfer",
    "solve_state",
    "solve_state_left",
    "transpose_realization",
    "is_symmetric_realization",
    "is_hermitian_realization",
    "realization_scale",
]

#: Relative threshold below which A(lambda) counts as singular (pole test).
POLE_RTOL = 1e-12


def _freeze(a) -> np.ndarray:
    """Return a read-only complex ndarray copy of ``a``."""
    out = np.array(a, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class MatrixPolynomial:
    """Dense matrix polynomial ``P(lambda) = sum_j lambda^j P_j``.

    Coefficients are stored in ascending degree order and are never empty;
    the zero polynomial is a single zero coefficient.  The degree is
    structural: trailing zero coefficients are preserved, so a realization
    can carry e.g. a degree-2 polynomial whose leading coefficient happens
    to vanish.
    """

    coeffs: tuple[np.ndarray, ...]
    rows: int = field(init=False)
    cols: int = field(init=False)

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise DimensionError("a matrix polynomial needs at least one coefficient")
        frozen = tuple(_freeze(c) for c in self.coeffs)
        rows, cols = frozen[0].shape if frozen[0].ndim == 2 else (None, None)
        for c in frozen:
            if c.ndim != 2 or c.shape != (rows, cols):
                raise DimensionError(
                    f"coefficient shapes disagree: expected {(rows, cols)}, got {c.shape}"
                )
        object.__setattr__(self, "coeffs", frozen)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, rows: int, cols: int) -> "MatrixPolynomial":
        return cls((np.zeros((rows, cols)),))

    @classmethod
    def from_scalars(cls, *scalars) -> "MatrixPolynomial":
        """1 x 1 polynomial from scalar coefficients in ascending degree."""
        return cls(tuple(np.array([[s]], dtype=complex) for s in scalars))

    def coefficient(self, j: int) -> np.ndarray:
        """Coefficient of lambda^j, zero-padded beyond the stored degree."""
        if 0 <= j <= self.degree:
            return self.coeffs[j]
        return np.zeros((self.rows, self.cols), dtype=complex)

    def __call__(self, lam: complex) -> np.ndarray:
        return eval_polymat(self, lam)

    def transpose(self) -> "MatrixPolynomial":
        return MatrixPolynomial(tuple(c.T for c in self.coeffs))

    def scale(self, alpha: complex) -> "MatrixPolynomial":
        return MatrixPolynomial(tuple(alpha * c for c in self.coeffs))

    def max_norm(self) -> float:
        return max(float(np.max(np.abs(c))) for c in self.coeffs)


def eval_polymat(P: MatrixPolynomial, lam: complex) -> np.ndarray:
    """Evaluate ``P(lambda)`` by Horner's scheme."""
    acc = np.array(P.coeffs[-1], dtype=complex)
    for c in reversed(P.coeffs[:-1]):
        acc = acc * lam + c
    return acc


def lambda_vector(d: int, lam: complex) -> np.ndarray:
    """Column ``[lambda^{d-1}, ..., lambda, 1]`` of descending powers.

    The trailing entry is always 1; this ordering matches every ansatz
    identity in the package.
    """
    if d < 1:
        raise DimensionError("lambda_vector needs d >= 1")
    return np.array([lam ** p for p in range(d - 1, -1, -1)], dtype=complex)


def padded_identity(r: int, n: int) -> np.ndarray:
    """The r x r identity padded with ``n - r`` zero columns (r <= n)."""
    if r > n:
        raise DimensionError(f"padded identity needs r <= n, got r={r}, n={n}")
    out = np.zeros((r, n))
    out[:, :r] = np.eye(r)
    return out


@dataclass(frozen=True)
class BlockDims:
    """Block partition (m, n, k, r) used by every pencil-space operation.

    The pencils act on C^{mn+kr}; the top partition is an m x m grid of
    n x n blocks, the bottom a k x k grid of r x r blocks.
    """

    m: int
    n: int
    k: int
    r: int

    def __post_init__(self):
        if min(self.m, self.n, self.k, self.r) < 1:
            raise DimensionError(f"block dims must be positive, got {self}")

    @property
    def top(self) -> int:
        return self.m * self.n

    @property
    def bottom(self) -> int:
        return self.k * self.r

    @property
    def size(self) -> int:
        return self.top + self.bottom


@dataclass(frozen=True)
class Realization:
    """State-space data (A(lambda), B, C, D(lambda)) of a transfer function.

    ``A`` is n x n of degree m >= 1 and ``D`` is r x r of degree k >= 1;
    both degrees are structural.  Regularity of A(lambda) is not enforced
    here; it is certified lazily by the determinant oracle in
    :mod:`syspencils.spectra`.
    """

    A: MatrixPolynomial
    B: np.ndarray
    C: np.ndarray
    D: MatrixPolynomial

    def __post_init__(self):
        B = _freeze(self.B)
        C = _freeze(self.C)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        n, r = self.A.rows, self.D.rows
        if self.A.cols != n:
            raise DimensionError("A(lambda) must be square")
        if self.D.cols != r:
            raise DimensionError("D(lambda) must be square")
        if self.A.degree < 1 or self.D.degree < 1:
            raise DimensionError("both A and D need degree >= 1")
        if B.shape != (n, r):
            raise DimensionError(f"B must be {n}x{r}, got {B.shape}")
        if C.shape != (r, n):
            raise DimensionError(f"C must be {r}x{n}, got {C.shape}")

    @property
    def n(self) -> int:
        return self.A.rows

    @property
    def r(self) -> int:
        return self.D.rows

    @property
    def m(self) -> int:
        return self.A.degree

    @property
    def k(self) -> int:
        return self.D.degree

    @property
    def dims(self) -> BlockDims:
        return BlockDims(self.m, self.n, self.k, self.r)


def build_system_matrix(R: Realization) -> MatrixPolynomial:
    """Assemble ``S(lambda) = [[A(lambda), -B], [C, D(lambda)]]``.

    Coefficient j carries A_j in the top-left and D_j in the bottom-right;
    the constant blocks -B and C sit in coefficient 0 only.  The degree is
    max(m, k).
    """
    n, r = R.n, R.r
    deg = max(R.m, R.k)
    coeffs = []
    for j in range(deg + 1):
        S = np.zeros((n + r, n + r), dtype=complex)
        S[:n, :n] = R.A.coefficient(j)
        S[n:, n:] = R.D.coefficient(j)
        if j == 0:
            S[:n, n:] = -R.B
            S[n:, :n] = R.C
        coeffs.append(S)
    return MatrixPolynomial(tuple(coeffs))


def solve_state(R: Realization, lam: complex, rhs: np.ndarray) -> np.ndarray:
    """Solve ``A(lambda) x = rhs``; raises PoleError near a pole."""
    Alam = eval_polymat(R.A, lam)
    sv = np.linalg.svd(Alam, compute_uv=False)
    if sv[-1] < POLE_RTOL * max(sv[0], 1.0):
        raise PoleError(f"A(lambda) is singular to tolerance at lambda={lam}")
    return np.linalg.solve(Alam, rhs)


def solve_state_left(R: Realization, lam: complex, lhs: np.ndarray) -> np.ndarray:
    """Solve ``x A(lambda) = lhs`` (returns ``lhs A(lambda)^{-1}``)."""
    Alam = eval_polymat(R.A, lam)
    sv = np.linalg.svd(Alam, compute_uv=False)
    if sv[-1] < POLE_RTOL * max(sv[0], 1.0):
        raise PoleError(f"A(lambda) is singular to tolerance at lambda={lam}")
    return np.linalg.solve(Alam.T, lhs.T).T


def eval_transfer(R: Realization, lam: complex) -> np.ndarray:
    """Evaluate ``G(lambda) = C A(lambda)^{-1} B + D(lambda)``.

    A linear solve is used, never an explicit inverse.  PoleError signals
    that lambda is numerically a pole of G (smallest singular value of
    A(lambda) below ``POLE_RTOL`` relative to the largest, floored at 1).
    """
    return R.C @ solve_state(R, lam, R.B) + eval_polymat(R.D, lam)


def transpose_realization(R: Realization) -> Realization:
    """A realization of ``G(lambda)^T``, sign-normalized for pencil duality.

    ``G^T = D^T + (-B^T) (A^T)^{-1} (-C^T)``; negating both constant blocks
    keeps the off-diagonal sign convention of the first-companion ansatz
    spaces intact under transposition, so that transposes of second-space
    members land exactly in the first space of this realization.
    """
    return Realization(A=R.A.transpose(), B=-R.C.T, C=-R.B.T, D=R.D.transpose())


def realization_scale(R: Realization) -> float:
    """Max-norm scale of the realization data (used by tolerance defaults)."""
    return max(
        R.A.max_norm(),
        R.D.max_norm(),
        float(np.max(np.abs(R.B))) if R.B.size else 0.0,
        float(np.max(np.abs(R.C))) if R.C.size else 0.0,
    )


def _structure_deviation(R: Realization, conj: bool) -> float:
    op = (lambda M: M.conj().T) if conj else (lambda M: M.T)
    dev = 0.0
    for c in R.A.coeffs + R.D.coeffs:
        dev = max(dev, float(np.max(np.abs(c - op(c)))))
    dev = max(dev, float(np.max(np.abs(op(R.C) - R.B))))
    return dev


def is_symmetric_realization(R: Realization, tol: float | None = None) -> bool:
    """True when all A_i, D_i are symmetric and C^T = B, to tolerance."""
    if tol is None:
        tol = 1e-10 * max(1.0, realization_scale(R))
    return _structure_deviation(R, conj=False) <= tol


def is_hermitian_realization(R: Realization, tol: float | None = None) -> bool:
    """True when all A_i, D_i are Hermitian and C* = B, to tolerance."""
    if tol is None:
        tol = 1e-10 * max(1.0, realization_scale(R))
    return _structure_deviation(R, conj=True) <= tol

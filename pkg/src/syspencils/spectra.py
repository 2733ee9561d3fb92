"""Spectral verification: determinant oracle, eigensolves and recovery.

The zero set of a realization is computed through an independent oracle:
the scalar polynomial det S(lambda) is recovered by DFT interpolation of
evaluations at scaled roots of unity, and its roots come from a balanced
companion eigensolve.  Pencil spectra come from a QZ solve of the pair
(Y, -X).  The two routes are compared as multisets by a greedy
nearest-neighbour matching; agreement at tolerance, together with the
ansatz residual, is the linearization verdict.  Full Z-rank of the
reduced diagonal parts is reported as the sufficient-condition
certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .core import (
    BlockDims,
    MatrixPolynomial,
    Realization,
    build_system_matrix,
    eval_polymat,
    lambda_vector,
    realization_scale,
    solve_state,
)
from .errors import (
    DegenerateVector,
    DimensionError,
    InterpolationError,
    NotAMember,
    PoleError,
    SingularSystem,
    SolverFailure,
    ZeroAnsatz,
    ZeroPolynomial,
)
from .spaces import (
    SPACE_L2G,
    AnsatzPencil,
    membership,
    residual_ansatz,
)

__all__ = [
    "SpectralReport",
    "ZRankCertificate",
    "PencilEigs",
    "RecoveredVector",
    "det_scalar_poly",
    "poly_roots",
    "system_zeros",
    "solve_pencil",
    "pencil_eigvals",
    "z_rank",
    "verify_linearization",
    "lift_right",
    "recover_right",
    "lift_left",
    "recover_left",
    "f_map",
    "g_map",
    "nonpole_samples",
    "match_multisets",
]

#: |beta| below this fraction of ||(alpha, beta)|| counts as infinite.
INF_EIG_RTOL = 1e-10

#: Radius ladder for determinant interpolation nodes; tried in order.
_RADII = (1.0, 1.37, 0.71, 1.9, 0.53, 1.13, 0.87, 1.61)


def det_scalar_poly(P: MatrixPolynomial, trim_rtol: float = 1e-10) -> np.ndarray:
    """Coefficients (ascending) of det P(lambda) by node interpolation.

    det P has degree at most s*d for an s x s polynomial of degree d, so
    it is interpolated exactly from s*d + 1 evaluations at roots of unity
    scaled by a radius from a fixed ladder; a new radius is tried whenever
    an evaluation overflows.  Trailing coefficients below ``trim_rtol``
    relative to the largest are trimmed.
    """
    if P.rows != P.cols:
        raise DimensionError("determinant needs a square matrix polynomial")
    s, d = P.rows, P.degree
    if d == 0:
        return np.array([np.linalg.det(P.coeffs[0])])
    N = s * d + 1
    nodes_base = np.exp(2j * np.pi * np.arange(N) / N)
    for radius in _RADII:
        vals = np.array([np.linalg.det(eval_polymat(P, radius * t)) for t in nodes_base])
        if np.all(np.isfinite(vals)):
            # values at radius * omega^j; forward DFT / N picks out c_t * radius^t
            coeffs = np.fft.fft(vals) / N / radius ** np.arange(N)
            return _trim_trailing(coeffs, trim_rtol)
    raise InterpolationError("determinant evaluations overflowed on every node radius")


def _trim_trailing(coeffs: np.ndarray, rtol: float) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=complex)
    top = float(np.max(np.abs(coeffs)))
    if top == 0.0:
        return coeffs[:1]
    keep = len(coeffs)
    while keep > 1 and abs(coeffs[keep - 1]) <= rtol * top:
        keep -= 1
    return coeffs[:keep]


def poly_roots(coeffs, trim_rtol: float = 1e-10) -> np.ndarray:
    """Roots of a scalar polynomial with ascending coefficients.

    The trimmed degree defines the root count; roots come from the
    balanced companion eigensolve behind ``numpy.roots``.
    """
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if coeffs.size == 0 or not np.any(np.abs(coeffs) > 0):
        raise ZeroPolynomial("all coefficients vanish")
    coeffs = _trim_trailing(coeffs, trim_rtol)
    if len(coeffs) == 1:
        return np.array([], dtype=complex)
    return np.roots(coeffs[::-1])


def _hadamard_scale(M: np.ndarray) -> float:
    norms = np.linalg.norm(M, axis=1)
    return float(np.prod(np.maximum(norms, 1e-30)))


def system_zeros(R: Realization) -> np.ndarray:
    """Multiset of system zeros: the roots of det S(lambda).

    Raises SingularSystem when det S vanishes identically to tolerance
    (measured against a Hadamard bound of the evaluations).
    """
    S = build_system_matrix(R)
    probe = [0.83 + 0.31j, -1.27 + 0.66j, 0.44 - 1.52j]
    dets = [abs(np.linalg.det(eval_polymat(S, lam))) for lam in probe]
    scales = [_hadamard_scale(eval_polymat(S, lam)) for lam in probe]
    if all(d <= 1e-10 * s for d, s in zip(dets, scales)):
        raise SingularSystem("det S(lambda) vanishes identically to tolerance")
    return poly_roots(det_scalar_poly(S))


def _pencil_is_regular(X: np.ndarray, Y: np.ndarray) -> bool:
    probe = [0.83 + 0.31j, -1.27 + 0.66j, 0.44 - 1.52j]
    for lam in probe:
        M = lam * X + Y
        sv = np.linalg.svd(M, compute_uv=False)
        if sv[-1] > 1e-8 * max(sv[0], 1e-30):
            return True
    return False


@dataclass(frozen=True)
class PencilEigs:
    """Finite eigentriples of a pencil, unit-norm eigenvectors columnwise."""

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray


def pencil_eigvals(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Finite eigenvalues of ``lambda X + Y`` (no eigenvectors)."""
    try:
        ab = scipy.linalg.eigvals(Y, -np.asarray(X, dtype=complex),
                                  homogeneous_eigvals=True)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:  # pragma: no cover
        raise SolverFailure(str(exc)) from exc
    alpha, beta = ab[0], ab[1]
    finite = np.abs(beta) > INF_EIG_RTOL * np.hypot(np.abs(alpha), np.abs(beta))
    return alpha[finite] / beta[finite]


def solve_pencil(X, Y=None) -> PencilEigs:
    """Finite eigenvalues and eigenvectors of ``lambda X + Y``.

    Delegates to the QZ solver for the pair (Y, -X), so that
    ``(lambda X + Y) u = 0`` and ``y* (lambda X + Y) = 0`` hold for the
    returned right/left vectors.  Eigenvalues with
    ``|beta| <= INF_EIG_RTOL * ||(alpha, beta)||`` are treated as infinite
    and dropped.
    """
    if Y is None:
        X, Y = X.X, X.Y
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    if X.shape != Y.shape or X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DimensionError("pencil coefficients must be square and of equal shape")
    try:
        ab, vl, vr = scipy.linalg.eig(Y, -X, left=True, right=True, homogeneous_eigvals=True)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:  # pragma: no cover
        raise SolverFailure(str(exc)) from exc
    alpha, beta = ab[0], ab[1]
    finite = np.abs(beta) > INF_EIG_RTOL * np.hypot(np.abs(alpha), np.abs(beta))
    lam = alpha[finite] / beta[finite]
    right = vr[:, finite]
    left = vl[:, finite]
    right = right / np.maximum(np.linalg.norm(right, axis=0), 1e-300)
    left = left / np.maximum(np.linalg.norm(left, axis=0), 1e-300)
    return PencilEigs(eigenvalues=lam, right=right, left=left)


def _eig_distance(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def match_multisets(a, b) -> tuple[list[tuple[int, int, float]], float]:
    """Greedy nearest-neighbour matching of two equal-size multisets.

    Entries of ``a`` are visited in decreasing magnitude and paired with
    the nearest unused entry of ``b`` under a scale-aware distance.
    Adequate at desk scale; not an optimal assignment.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size != b.size:
        raise DimensionError("multisets differ in size")
    order = np.argsort(-np.abs(a), kind="stable")
    free = list(range(b.size))
    pairs = []
    worst = 0.0
    for i in order:
        dists = [_eig_distance(a[i], b[j]) for j in free]
        jloc = int(np.argmin(dists))
        j = free.pop(jloc)
        d = dists[jloc]
        pairs.append((int(i), j, d))
        worst = max(worst, d)
    return pairs, worst


@dataclass(frozen=True)
class ZRankCertificate:
    """Numerical ranks of the free blocks in the reduced diagonal parts."""

    rank_L: int
    full_L: bool
    rank_K: int
    full_K: bool
    transform_M: np.ndarray
    transform_N: np.ndarray


def _unit_mapping(v: np.ndarray) -> np.ndarray:
    """Nonsingular M with M v = e_1, built from a Householder reflector."""
    m = v.size
    nv = np.linalg.norm(v)
    if nv == 0.0:
        raise ZeroAnsatz("ansatz vector is zero")
    if np.linalg.norm(v[1:]) <= 1e-300:
        M = np.eye(m, dtype=complex)
        M[0, 0] = 1.0 / v[0]
        return M
    phase = v[0] / abs(v[0]) if abs(v[0]) > 0 else 1.0
    alpha = -phase * nv
    u = v.astype(complex).copy()
    u[0] -= alpha
    H = np.eye(m, dtype=complex) - 2.0 * np.outer(u, u.conj()) / np.vdot(u, u)
    return H / alpha


def _z_block_rank(Ytl: np.ndarray, v: np.ndarray, blk: int, tol: float):
    deg = v.size
    M = _unit_mapping(v)
    if deg == 1:
        return 0, True, M
    Yhat = np.kron(M, np.eye(blk)) @ Ytl
    Z = Yhat[blk:, : (deg - 1) * blk]
    sv = np.linalg.svd(Z, compute_uv=False)
    rank = int(np.sum(sv > tol * max(sv[0], 1e-300)))
    return rank, rank == (deg - 1) * blk, M


def z_rank(P: AnsatzPencil, R: Realization, tol: float = 1e-10) -> ZRankCertificate:
    """Z-rank certificate of both diagonal parts of a space member.

    A nonsingular M with ``M v = e_1`` reduces the top partition to the
    canonical form whose lower-left constant block is the free block Z;
    the rank of Z does not depend on the choice of M.  Second-space
    members are reduced through their transposes.  Raises ZeroAnsatz when
    either ansatz vector vanishes.
    """
    dims = P.dims
    t = dims.top
    if P.space == SPACE_L2G:
        Ytl = P.Y[:t, :t].T
        Ybr = P.Y[t:, t:].T
    else:
        Ytl = P.Y[:t, :t]
        Ybr = P.Y[t:, t:]
    rank_L, full_L, M = _z_block_rank(Ytl, P.v, dims.n, tol)
    rank_K, full_K, N = _z_block_rank(Ybr, P.w, dims.r, tol)
    return ZRankCertificate(rank_L=rank_L, full_L=full_L, rank_K=rank_K, full_K=full_K,
                            transform_M=M, transform_N=N)


def nonpole_samples(R: Realization, count: int, seed: int = 7,
                    reject_rtol: float = 1e-3) -> np.ndarray:
    """Deterministic sample points on an annulus, away from poles of G.

    Points with ``sigma_min(A(lambda)) < reject_rtol * max(1, sigma_max)``
    are redrawn, so downstream solves stay well conditioned.
    """
    rng = np.random.default_rng(seed)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count:
            raise InterpolationError("could not find enough sample points away from poles")
        radius = rng.uniform(0.4, 1.6)
        angle = rng.uniform(0.0, 2.0 * np.pi)
        lam = radius * np.exp(1j * angle)
        sv = np.linalg.svd(eval_polymat(R.A, lam), compute_uv=False)
        if sv[-1] >= reject_rtol * max(1.0, sv[0]):
            out.append(lam)
    return np.array(out)


@dataclass(frozen=True)
class SpectralReport:
    """Outcome of a linearization verification run."""

    pencil_eigs: np.ndarray
    oracle_roots: np.ndarray
    matching: list = field(default_factory=list)
    max_eig_error: float = np.inf
    eig_residuals: list = field(default_factory=list)
    verdict: str = "fail"
    reason: str = ""
    ansatz_residual: float = np.inf
    full_z_rank: tuple = (False, False)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "pencil_eigs": [[z.real, z.imag] for z in self.pencil_eigs],
            "oracle_roots": [[z.real, z.imag] for z in self.oracle_roots],
            "matching": [[int(i), int(j), float(d)] for (i, j, d) in self.matching],
            "max_eig_error": float(self.max_eig_error),
            "eig_residuals": [float(x) for x in self.eig_residuals],
            "ansatz_residual": float(self.ansatz_residual),
            "full_z_rank": [bool(self.full_z_rank[0]), bool(self.full_z_rank[1])],
        }


def verify_linearization(P: AnsatzPencil, R: Realization,
                         tol_res: float | None = None,
                         tol_eig: float = 1e-6,
                         n_samples: int = 10,
                         seed: int = 7) -> SpectralReport:
    """Check that a space member is a linearization of the system matrix.

    Three checks run: (i) the ansatz residual at sample points away from
    poles, (ii) the full-Z-rank certificate on both diagonal parts
    (reported, not required; it is the sufficient condition), and (iii)
    spectral equivalence, i.e. the finite pencil eigenvalues match the
    system zeros as multisets at ``tol_eig`` under the scale-aware greedy
    matching.  The verdict is pass exactly when (i) and (iii) hold.
    """
    if tol_res is None:
        tol_res = 1e-10 * (1.0 + realization_scale(R))

    zeros = system_zeros(R)

    def fail(reason, pencil_eigs=None, **kw):
        if pencil_eigs is None:
            pencil_eigs = np.array([], dtype=complex)
        return SpectralReport(pencil_eigs=pencil_eigs, oracle_roots=zeros,
                              verdict="fail", reason=reason, **kw)

    try:
        membership(P.X, P.Y, R, P.space)
    except NotAMember as exc:
        return fail(f"membership: {exc}")

    samples = nonpole_samples(R, n_samples, seed=seed)
    res = residual_ansatz(P, R, samples)

    try:
        cert = z_rank(P, R)
        flags = (cert.full_L, cert.full_K)
    except ZeroAnsatz:
        flags = (False, False)

    if not _pencil_is_regular(P.X, P.Y):
        return fail("pencil is singular (det vanishes identically)",
                    ansatz_residual=res, full_z_rank=flags)

    eigs = solve_pencil(P.X, P.Y)
    if eigs.eigenvalues.size != zeros.size:
        return fail(
            f"eigenvalue count mismatch: pencil has {eigs.eigenvalues.size} finite, "
            f"oracle has {zeros.size}",
            pencil_eigs=eigs.eigenvalues, ansatz_residual=res, full_z_rank=flags)

    pairs, worst = match_multisets(eigs.eigenvalues, zeros)
    scaleX = np.linalg.norm(P.X)
    scaleY = np.linalg.norm(P.Y)
    residuals = [
        float(np.linalg.norm((lam * P.X + P.Y) @ eigs.right[:, i])
              / max(abs(lam) * scaleX + scaleY, 1e-300))
        for i, lam in enumerate(eigs.eigenvalues)
    ]

    ok = res <= tol_res and worst <= tol_eig
    reason = "" if ok else (
        f"ansatz residual {res:.2e} > {tol_res:.2e}" if res > tol_res
        else f"eigenvalue mismatch {worst:.2e} > {tol_eig:.2e}")
    return SpectralReport(
        pencil_eigs=eigs.eigenvalues, oracle_roots=zeros, matching=pairs,
        max_eig_error=worst, eig_residuals=residuals,
        verdict="pass" if ok else "fail", reason=reason,
        ansatz_residual=res, full_z_rank=flags)


def lift_right(R: Realization, x: np.ndarray, lam0: complex) -> np.ndarray:
    """Lift a transfer-function null vector to pencil eigenvector shape.

    Returns ``[Lambda_{m-1} kron A(lam0)^{-1} B x ; Lambda_{k-1} kron x]``.
    """
    x = np.asarray(x, dtype=complex).reshape(-1)
    top = solve_state(R, lam0, R.B @ x)
    return np.concatenate([
        np.kron(lambda_vector(R.m, lam0), top),
        np.kron(lambda_vector(R.k, lam0), x),
    ])


def _solve_adjoint(R: Realization, lam0: complex, rhs: np.ndarray) -> np.ndarray:
    """Solve ``A(lam0)* z = rhs`` with the pole guard of the forward solve."""
    Alam = eval_polymat(R.A, lam0)
    sv = np.linalg.svd(Alam, compute_uv=False)
    if sv[-1] < 1e-12 * max(sv[0], 1.0):
        raise PoleError(f"A(lambda) is singular to tolerance at lambda={lam0}")
    return np.linalg.solve(Alam.conj().T, rhs)


def lift_left(R: Realization, y: np.ndarray, lam0: complex) -> np.ndarray:
    """Left analogue: ``[conj(Lambda) kron (-C A^{-1})* y ; conj(Lambda) kron y]``."""
    y = np.asarray(y, dtype=complex).reshape(-1)
    top = -_solve_adjoint(R, lam0, R.C.conj().T @ y)
    return np.concatenate([
        np.kron(lambda_vector(R.m, lam0).conj(), top),
        np.kron(lambda_vector(R.k, lam0).conj(), y),
    ])


@dataclass(frozen=True)
class RecoveredVector:
    """Eigenvector recovered from a lifted pencil eigenvector."""

    x: np.ndarray
    structural_residual: float
    used_fallback: bool = False


def _recover(u: np.ndarray, dims: BlockDims, R: Realization, lam0: complex,
             lift, conj_powers: bool) -> RecoveredVector:
    u = np.asarray(u, dtype=complex).reshape(-1)
    if u.shape != (dims.size,):
        raise DimensionError(f"vector length must be {dims.size}")
    norm_u = np.linalg.norm(u)
    if norm_u == 0.0:
        raise DegenerateVector("zero vector cannot be recovered from")
    k, r = dims.k, dims.r
    bottom = u[dims.top:]
    trailing = bottom[(k - 1) * r:]
    used_fallback = False
    if np.linalg.norm(trailing) <= 1e-8 * norm_u:
        # trailing coefficient of the power stack is tiny; fall back to the
        # largest block, dividing out its power of lambda
        blocks = bottom.reshape(k, r)
        j = int(np.argmax(np.linalg.norm(blocks, axis=1)))
        power = lam0 ** (k - 1 - j)
        if conj_powers:
            power = np.conj(power)
        if np.linalg.norm(blocks[j]) <= 1e-12 * norm_u or abs(power) < 1e-300:
            raise DegenerateVector("no block of the bottom partition is usable")
        trailing = blocks[j] / power
        used_fallback = True
    x = trailing / np.linalg.norm(trailing)
    L = lift(R, x, lam0)
    c = np.vdot(u, L) / np.vdot(u, u)
    residual = float(np.linalg.norm(c * u - L))
    return RecoveredVector(x=x, structural_residual=residual, used_fallback=used_fallback)


def recover_right(u: np.ndarray, dims: BlockDims, R: Realization,
                  lam0: complex) -> RecoveredVector:
    """Extract the transfer-function eigenvector from a right pencil eigenvector.

    The trailing r entries of the bottom partition carry the eigenvector
    (they multiply the trailing 1 of the power stack); the result is unit
    norm and the structural residual reports the distance of ``u`` to the
    lifted form at the best scale.
    """
    return _recover(u, dims, R, lam0, lift_right, conj_powers=False)


def recover_left(u: np.ndarray, dims: BlockDims, R: Realization,
                 lam0: complex) -> RecoveredVector:
    """Left analogue of :func:`recover_right` (conjugated power stack)."""
    return _recover(u, dims, R, lam0, lift_left, conj_powers=True)


def f_map(R: Realization, x: np.ndarray, lam0: complex) -> np.ndarray:
    """Null-space map ``x -> [A(lam0)^{-1} B x ; x]``.

    Sends right null vectors of G(lam0) to right null vectors of S(lam0).
    """
    x = np.asarray(x, dtype=complex).reshape(-1)
    return np.concatenate([solve_state(R, lam0, R.B @ x), x])


def g_map(R: Realization, y: np.ndarray, lam0: complex) -> np.ndarray:
    """Null-space map ``y -> [(-C A(lam0)^{-1})* y ; y]`` for left vectors."""
    y = np.asarray(y, dtype=complex).reshape(-1)
    return np.concatenate([-_solve_adjoint(R, lam0, R.C.conj().T @ y), y])

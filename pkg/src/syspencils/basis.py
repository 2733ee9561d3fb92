"""Non-monomial polynomial bases for the ansatz spaces.

A degree-graded basis ``phi_0, ..., phi_{d-1}`` of the polynomials of
degree below d is encoded by the nonsingular matrix ``Phi`` with
``Phi Lambda(lambda) = [phi_0(lambda), ..., phi_{d-1}(lambda)]^T`` for the
descending-power stack Lambda.  Right-multiplying a first-space pencil by
``blockdiag(Phi^{-1} kron I_n, Psi^{-1} kron I_r)`` turns the monomial
ansatz identity into its basis analogue; the map is a strict equivalence,
so spectra are preserved.  The ordering permutation between the
phi-ordering (phi_0 first) and the descending Lambda is absorbed into Phi
itself; there is no separate reordering step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Realization, eval_polymat, lambda_vector, solve_state
from .errors import DimensionError, SingularBasis
from .spaces import SPACE_L1G, AnsatzPencil, build_pencil_L1

__all__ = [
    "BasisSpec",
    "phi_matrix",
    "build_L1_tilde",
    "tilde_to_monomial",
    "residual_tilde",
]

_KINDS = ("monomial", "chebyshev_T", "newton", "custom")


@dataclass(frozen=True)
class BasisSpec:
    """Specification of a degree-graded scalar polynomial basis.

    ``kind`` is one of ``monomial``, ``chebyshev_T``, ``newton`` or
    ``custom``.  Newton bases need exactly d - 1 nodes; a custom basis
    supplies its coefficient rows (one polynomial per row, against
    descending powers) directly.
    """

    kind: str
    d: int
    nodes: tuple = ()
    rows: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DimensionError(f"unknown basis kind {self.kind!r}")
        if self.d < 1:
            raise DimensionError("basis needs d >= 1")
        object.__setattr__(self, "nodes", tuple(complex(x) for x in self.nodes))
        if self.kind == "newton" and len(self.nodes) != self.d - 1:
            raise DimensionError(
                f"newton basis of size {self.d} needs exactly {self.d - 1} nodes")
        if self.kind == "custom":
            rows = np.asarray(self.rows, dtype=complex)
            if rows.shape != (self.d, self.d):
                raise DimensionError(f"custom basis rows must be {self.d}x{self.d}")
            object.__setattr__(self, "rows", rows)


def _ascending_to_row(asc: np.ndarray, d: int) -> np.ndarray:
    # coefficients ascending in degree -> row against [l^{d-1}, ..., l, 1]
    row = np.zeros(d, dtype=complex)
    for j, c in enumerate(asc):
        row[d - 1 - j] = c
    return row


def phi_matrix(spec: BasisSpec) -> np.ndarray:
    """The matrix with ``Phi Lambda(lambda) = [phi_0, ..., phi_{d-1}]^T``.

    Row j holds the coefficients of phi_j against descending powers.  The
    result is checked for nonsingularity; duplicate Newton nodes are
    rejected up front as a specification error.
    """
    d = spec.d
    if spec.kind == "monomial":
        return np.eye(d)[::-1].astype(complex)
    if spec.kind == "chebyshev_T":
        polys = [np.array([1.0 + 0j]), np.array([0.0, 1.0 + 0j])]
        while len(polys) < d:
            prev, cur = polys[-2], polys[-1]
            nxt = np.zeros(len(cur) + 1, dtype=complex)
            nxt[1:] = 2.0 * cur
            nxt[: len(prev)] -= prev
            polys.append(nxt)
        Phi = np.array([_ascending_to_row(p, d) for p in polys[:d]])
    elif spec.kind == "newton":
        for i, a in enumerate(spec.nodes):
            for b in spec.nodes[i + 1:]:
                if abs(a - b) <= 1e-12 * max(1.0, abs(a), abs(b)):
                    raise SingularBasis(f"duplicate newton nodes {a} and {b}")
        polys = [np.array([1.0 + 0j])]
        for node in spec.nodes:
            polys.append(np.convolve(polys[-1], np.array([-node, 1.0 + 0j])))
        Phi = np.array([_ascending_to_row(p, d) for p in polys[:d]])
    else:
        Phi = np.array(spec.rows, dtype=complex)
    sv = np.linalg.svd(Phi, compute_uv=False)
    if sv[-1] <= 1e-12 * max(sv[0], 1.0):
        raise SingularBasis("basis matrix is singular to tolerance")
    return Phi


def _right_transform(Phi: np.ndarray, Psi: np.ndarray, n: int, r: int,
                     invert: bool) -> np.ndarray:
    top = np.linalg.inv(Phi) if invert else Phi
    bot = np.linalg.inv(Psi) if invert else Psi
    m, k = Phi.shape[0], Psi.shape[0]
    T = np.zeros((m * n + k * r, m * n + k * r), dtype=complex)
    T[: m * n, : m * n] = np.kron(top, np.eye(n))
    T[m * n:, m * n:] = np.kron(bot, np.eye(r))
    return T


def build_L1_tilde(R: Realization, spec_A: BasisSpec, spec_D: BasisSpec,
                   v, w, W=None, W1=None) -> AnsatzPencil:
    """First-space pencil expressed against non-monomial bases.

    The monomial member for (v, w, W, W1) is right-multiplied by
    ``blockdiag(Phi^{-1} kron I_n, Psi^{-1} kron I_r)``, after which the
    ansatz identity holds with the basis stacks:
    ``T(lambda) [Lambda_phi kron A^{-1}B ; Lambda_psi kron I_r] =
    [0 ; w kron G(lambda)]``.
    """
    if spec_A.d != R.m or spec_D.d != R.k:
        raise DimensionError("basis sizes must match the polynomial degrees (m, k)")
    P = build_pencil_L1(R, v, w, W, W1, space=SPACE_L1G)
    T = _right_transform(phi_matrix(spec_A), phi_matrix(spec_D), R.n, R.r, invert=True)
    return AnsatzPencil(X=P.X @ T, Y=P.Y @ T, dims=P.dims, space=SPACE_L1G,
                        v=P.v, w=P.w, W=P.W, W1=P.W1)


def tilde_to_monomial(P: AnsatzPencil, spec_A: BasisSpec, spec_D: BasisSpec,
                      dims=None) -> AnsatzPencil:
    """Map a basis-form pencil back to the monomial space.

    Right multiplication by ``blockdiag(Phi kron I_n, Psi kron I_r)``;
    inverse of :func:`build_L1_tilde`, and a linear isomorphism between
    the two spaces (strict equivalence, so spectra coincide).
    """
    dims = dims if dims is not None else P.dims
    if spec_A.d != dims.m or spec_D.d != dims.k:
        raise DimensionError("basis sizes must match the block dims (m, k)")
    T = _right_transform(phi_matrix(spec_A), phi_matrix(spec_D), dims.n, dims.r,
                         invert=False)
    return AnsatzPencil(X=P.X @ T, Y=P.Y @ T, dims=dims, space=P.space,
                        v=P.v, w=P.w, W=None, W1=None)


def residual_tilde(P: AnsatzPencil, R: Realization, spec_A: BasisSpec,
                   spec_D: BasisSpec, lam_samples) -> float:
    """Max deviation of the basis-form ansatz identity over the samples."""
    Phi = phi_matrix(spec_A)
    Psi = phi_matrix(spec_D)
    m, n, k, r = R.m, R.n, R.k, R.r
    worst = 0.0
    for lam in lam_samples:
        F = solve_state(R, lam, R.B)
        G = R.C @ F + eval_polymat(R.D, lam)
        lam_phi = Phi @ lambda_vector(m, lam)
        lam_psi = Psi @ lambda_vector(k, lam)
        M = np.vstack([
            np.kron(lam_phi.reshape(-1, 1), F),
            np.kron(lam_psi.reshape(-1, 1), np.eye(r)),
        ])
        target = np.vstack([
            np.zeros((m * n, r), dtype=complex),
            np.kron(P.w.reshape(-1, 1), G),
        ])
        worst = max(worst, float(np.max(np.abs(P(lam) @ M - target))))
    return worst

import numpy as np
import pytest
from conftest import cgauss, random_realization

from syspencils import (
    DegenerateVector,
    MatrixPolynomial,
    Realization,
    SingularSystem,
    ZeroAnsatz,
    ZeroPolynomial,
    build_C1,
    build_C2,
    build_DL,
    build_pencil_L1,
    build_system_matrix,
    det_scalar_poly,
    eval_polymat,
    eval_transfer,
    f_map,
    g_map,
    lift_left,
    lift_right,
    match_multisets,
    poly_roots,
    recover_left,
    recover_right,
    sample_space,
    solve_pencil,
    system_zeros,
    verify_linearization,
    z_rank,
)


def test_det_scalar_poly_r1(r1):
    coeffs = det_scalar_poly(build_system_matrix(r1))
    assert np.allclose(coeffs, [1, -2, 1], atol=1e-12)


def test_det_scalar_poly_degree_zero_and_diag():
    assert np.allclose(det_scalar_poly(MatrixPolynomial((np.eye(2),))), [1])
    lam_diag = MatrixPolynomial((np.zeros((2, 2)), np.eye(2)))  # diag(lambda, lambda)
    assert np.allclose(det_scalar_poly(lam_diag), [0, 0, 1], atol=1e-12)


def test_poly_roots():
    _, worst = match_multisets(poly_roots([1, -2, 1]), [1.0, 1.0])
    assert worst < 1e-7  # double root: sqrt(eps)-level splitting expected
    _, worst = match_multisets(poly_roots([1, 0, 1]), [-1j, 1j])
    assert worst < 1e-12
    roots = poly_roots([1, 1, 0, 1])  # lambda^3 + lambda + 1
    for root in roots:
        assert abs(1 + root + root**3) < 1e-10
    with pytest.raises(ZeroPolynomial):
        poly_roots([0.0, 0.0])


def test_system_zeros(r1, r2):
    _, worst = match_multisets(system_zeros(r1), [1.0, 1.0])
    assert worst < 1e-6
    _, worst = match_multisets(system_zeros(r2), np.roots([1, 0, 1, 1]))
    assert worst < 1e-8


def test_system_zeros_decoupled():
    R = Realization(A=MatrixPolynomial.from_scalars(0, 1), B=np.zeros((1, 1)),
                    C=np.zeros((1, 1)), D=MatrixPolynomial.from_scalars(0, 1))
    _, worst = match_multisets(system_zeros(R), [0.0, 0.0])
    assert worst < 1e-6  # double root at the origin


def test_system_zeros_singular_system():
    D = MatrixPolynomial((np.ones((2, 2)) * 0.0, np.ones((2, 2))))  # rank-1 everywhere
    R = Realization(A=MatrixPolynomial.from_scalars(0, 1), B=np.zeros((1, 2)),
                    C=np.zeros((2, 1)), D=D)
    with pytest.raises(SingularSystem):
        system_zeros(R)


def test_solve_pencil_examples(r1):
    P = build_C1(r1)
    eigs = solve_pencil(P.X, P.Y)
    assert np.allclose(np.sort_complex(eigs.eigenvalues), [1, 1], atol=1e-7)
    diag = solve_pencil(np.eye(2), np.diag([-1.0, -2.0]))
    assert np.allclose(np.sort_complex(diag.eigenvalues), [1, 2], atol=1e-12)
    none = solve_pencil(np.zeros((2, 2)), np.eye(2))
    assert none.eigenvalues.size == 0


def test_solve_pencil_eigenvector_conventions():
    rng = np.random.default_rng(0)
    X, Y = cgauss(rng, 5, 5), cgauss(rng, 5, 5)
    eigs = solve_pencil(X, Y)
    for i, lam in enumerate(eigs.eigenvalues):
        M = lam * X + Y
        assert np.linalg.norm(M @ eigs.right[:, i]) < 1e-10 * np.linalg.norm(M)
        assert np.linalg.norm(eigs.left[:, i].conj() @ M) < 1e-10 * np.linalg.norm(M)


def test_match_multisets():
    pairs, worst = match_multisets([1.0, 2.0], [2.0 + 1e-9, 1.0])
    assert worst < 1e-8
    with pytest.raises(Exception):
        match_multisets([1.0], [1.0, 2.0])


def test_z_rank_companion(r2):
    P = build_C1(r2)
    cert = z_rank(P, r2)
    assert cert.rank_L == 1 and cert.full_L
    assert cert.rank_K == 0 and cert.full_K  # k = 1: empty block counts as full
    assert np.allclose(cert.transform_M @ P.v, np.eye(2)[0], atol=1e-12)


def test_z_rank_zero_free_block(r2):
    # with W = 0 the reduced free block vanishes: rank 0, not full
    P = build_pencil_L1(r2, [1.0, 0.0], [1.0], np.zeros((2, 1)), None)
    cert = z_rank(P, r2)
    assert cert.rank_L == 0 and not cert.full_L


def test_z_rank_trivial_degrees(r1):
    cert = z_rank(build_C1(r1), r1)
    assert cert.full_L and cert.full_K and cert.rank_L == 0 and cert.rank_K == 0


def test_z_rank_zero_ansatz(r1):
    P = build_pencil_L1(r1, [0.0], [0.0])
    with pytest.raises(ZeroAnsatz):
        z_rank(P, r1)


def test_z_rank_invariant_under_reduction_choice():
    rng = np.random.default_rng(1)
    R = random_realization(rng, 3, 2, 2, 1)
    v, w = cgauss(rng, 3), cgauss(rng, 2)
    P = build_pencil_L1(R, v, w, cgauss(rng, 6, 4), cgauss(rng, 2, 1))
    cert = z_rank(P, R)
    n, m = R.n, R.m
    t = R.dims.top
    for trial in range(5):
        # any other nonsingular M' with M'v = e1 must give the same rank
        E = cgauss(rng, m, m) @ (np.eye(m) - np.outer(v, v.conj()) / np.vdot(v, v))
        Mp = cert.transform_M + E
        assert np.allclose(Mp @ v, np.eye(m)[0], atol=1e-10)
        assert abs(np.linalg.det(Mp)) > 1e-8
        Z = (np.kron(Mp, np.eye(n)) @ P.Y[:t, :t])[n:, : (m - 1) * n]
        sv = np.linalg.svd(Z, compute_uv=False)
        rank = int(np.sum(sv > 1e-10 * sv[0]))
        assert rank == cert.rank_L


def test_z_rank_and_verify_second_space():
    rng = np.random.default_rng(10)
    R = random_realization(rng, 3, 2, 2, 2)
    P = build_C2(R)
    cert = z_rank(P, R)
    assert cert.full_L and cert.rank_L == (R.m - 1) * R.n
    assert cert.full_K and cert.rank_K == (R.k - 1) * R.r
    assert verify_linearization(P, R).passed
    assert verify_linearization(sample_space(R, seed=5, space="l2g"), R).passed


def test_verify_c1_r1(r1):
    report = verify_linearization(build_C1(r1), r1)
    assert report.passed
    assert np.allclose(np.sort_complex(report.pencil_eigs), [1, 1], atol=1e-6)
    assert report.max_eig_error <= 1e-6
    assert report.full_z_rank == (True, True)


def test_verify_dl_with_zero_leading_coefficient_fails():
    rng = np.random.default_rng(2)
    R = random_realization(rng, 2, 2, 2, 1)
    Rz = Realization(
        A=MatrixPolynomial((R.A.coeffs[0], R.A.coeffs[1], np.zeros((2, 2)))),
        B=R.B, C=R.C, D=R.D)
    report = verify_linearization(build_DL(Rz), Rz)
    assert not report.passed


def test_verify_zero_pencil_fails(r1):
    P = build_pencil_L1(r1, [0.0], [0.0])
    report = verify_linearization(P, r1)
    assert not report.passed


def test_lift_right_r1(r1):
    u = lift_right(r1, np.array([1.0]), 1.0)
    assert np.allclose(u, [-1.0, 1.0])


def test_lift_right_trailing_block():
    rng = np.random.default_rng(3)
    R = random_realization(rng, 2, 2, 3, 2)
    x = cgauss(rng, 2)
    u = lift_right(R, x, 0.0)
    assert np.allclose(u[-2:], x)  # trailing 1 in the power stack


def test_recover_right_round_trip():
    rng = np.random.default_rng(4)
    for _ in range(5):
        R = random_realization(rng, 2, 2, 2, 2)
        x = cgauss(rng, 2)
        lam0 = complex(cgauss(rng))
        u = lift_right(R, x, lam0)
        rec = recover_right(u, R.dims, R, lam0)
        xn = x / np.linalg.norm(x)
        phase = np.vdot(rec.x, xn)
        assert np.allclose(rec.x * phase / abs(phase), xn, atol=1e-10)
        assert rec.structural_residual < 1e-12
        assert not rec.used_fallback


def test_recover_right_r1(r1):
    rec = recover_right(np.array([-1.0, 1.0]), r1.dims, r1, 1.0)
    assert abs(abs(rec.x[0]) - 1.0) < 1e-14
    assert np.linalg.norm(eval_transfer(r1, 1.0) @ rec.x) < 1e-12


def test_recover_right_end_to_end(r2):
    P = build_C1(r2)
    eigs = solve_pencil(P.X, P.Y)
    assert eigs.eigenvalues.size == 3
    for i, lam in enumerate(eigs.eigenvalues):
        rec = recover_right(eigs.right[:, i], r2.dims, r2, lam)
        assert np.linalg.norm(eval_transfer(r2, lam) @ rec.x) < 1e-8


def test_recover_fallback_flag():
    rng = np.random.default_rng(5)
    R = random_realization(rng, 1, 2, 2, 2)
    x = cgauss(rng, 2)
    lam0 = 2.0
    u = lift_right(R, x, lam0)
    u[-2:] = 0.0  # strip the trailing block; the larger block is still usable
    rec = recover_right(u, R.dims, R, lam0)
    assert rec.used_fallback
    xn = x / np.linalg.norm(x)
    phase = np.vdot(rec.x, xn)
    assert np.allclose(rec.x * phase / abs(phase), xn, atol=1e-10)
    with pytest.raises(DegenerateVector):
        recover_right(np.zeros(R.dims.size), R.dims, R, lam0)


def test_lift_and_recover_left(r1):
    # the lifted vector is a genuine left null vector of the companion
    # pencil at the eigenvalue
    u = lift_left(r1, np.array([1.0]), 1.0)
    P = build_C1(r1)
    assert np.linalg.norm(u.conj() @ (1.0 * P.X + P.Y)) < 1e-13
    rng = np.random.default_rng(6)
    R = random_realization(rng, 2, 2, 2, 2)
    y = cgauss(rng, 2)
    lam0 = complex(cgauss(rng))
    u = lift_left(R, y, lam0)
    rec = recover_left(u, R.dims, R, lam0)
    yn = y / np.linalg.norm(y)
    phase = np.vdot(rec.x, yn)
    assert np.allclose(rec.x * phase / abs(phase), yn, atol=1e-10)
    assert rec.structural_residual < 1e-12


def test_recover_left_end_to_end(r2):
    P = build_C2(r2)
    eigs = solve_pencil(P.X, P.Y)
    for i, lam in enumerate(eigs.eigenvalues):
        rec = recover_left(eigs.left[:, i], r2.dims, r2, lam)
        res = rec.x.conj() @ eval_transfer(r2, lam)
        assert np.linalg.norm(res) < 1e-8


def test_f_map_r1(r1):
    f = f_map(r1, np.array([1.0]), 1.0)
    assert np.allclose(f, [-1.0, 1.0])
    S1 = np.array([[-1.0, -1.0], [1.0, 1.0]])  # S(1) for r1
    assert np.linalg.norm(S1 @ f) < 1e-14
    assert np.allclose(f_map(r1, np.array([0.0]), 1.0), [0.0, 0.0])


def test_f_and_g_maps_at_computed_zeros():
    rng = np.random.default_rng(7)
    for _ in range(4):
        R = random_realization(rng, 2, 2, 2, 2)
        zeros = system_zeros(R)
        lam0 = zeros[int(np.argmax(np.abs(zeros)))]
        S = eval_polymat(build_system_matrix(R), lam0)
        G = eval_transfer(R, lam0)
        # right and left null vectors of G at the zero
        _, _, Vh = np.linalg.svd(G)
        x = Vh[-1, :].conj()
        U, _, _ = np.linalg.svd(G)
        y = U[:, -1]
        assert np.linalg.norm(S @ f_map(R, x, lam0)) < 1e-8
        assert np.linalg.norm(g_map(R, y, lam0).conj() @ S) < 1e-8


def test_pencil_det_matches_solver():
    rng = np.random.default_rng(8)
    for _ in range(5):
        X, Y = cgauss(rng, 6, 6), cgauss(rng, 6, 6)
        coeffs = det_scalar_poly(MatrixPolynomial((Y, X)))
        assert len(coeffs) - 1 <= 6
        roots = poly_roots(coeffs)
        eigs = solve_pencil(X, Y).eigenvalues
        _, worst = match_multisets(roots, eigs)
        assert worst < 1e-8


def test_oracle_equivalence_small_sweep():
    # lighter companion of the acceptance sweep: 10 seeds, random sizes
    rng = np.random.default_rng(9)
    for seed in range(10):
        m, k = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        n, r = int(rng.integers(1, 4)), int(rng.integers(1, 3))
        R = random_realization(rng, m, n, k, r)
        zeros = system_zeros(R)
        for P in (build_C1(R), build_C2(R), build_DL(R),
                  sample_space(R, seed=seed, space="l1g")):
            eigs = solve_pencil(P.X, P.Y).eigenvalues
            assert eigs.size == zeros.size
            _, worst = match_multisets(eigs, zeros)
            assert worst < 1e-6

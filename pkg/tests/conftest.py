import numpy as np
import pytest

from syspencils import MatrixPolynomial, Realization


def cgauss(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_realization(rng, m, n, k, r):
    A = MatrixPolynomial(tuple(cgauss(rng, n, n) for _ in range(m + 1)))
    D = MatrixPolynomial(tuple(cgauss(rng, r, r) for _ in range(k + 1)))
    return Realization(A=A, B=cgauss(rng, n, r), C=cgauss(rng, r, n), D=D)


def random_symmetric_realization(rng, m, n, k, r):
    def sym(M):
        return (M + M.T) / 2

    A = MatrixPolynomial(tuple(sym(cgauss(rng, n, n)) for _ in range(m + 1)))
    D = MatrixPolynomial(tuple(sym(cgauss(rng, r, r)) for _ in range(k + 1)))
    B = cgauss(rng, n, r)
    return Realization(A=A, B=B, C=B.T.copy(), D=D)


def random_hermitian_realization(rng, m, n, k, r):
    def herm(M):
        return (M + M.conj().T) / 2

    A = MatrixPolynomial(tuple(herm(cgauss(rng, n, n)) for _ in range(m + 1)))
    D = MatrixPolynomial(tuple(herm(cgauss(rng, r, r)) for _ in range(k + 1)))
    B = cgauss(rng, n, r)
    return Realization(A=A, B=B, C=B.conj().T.copy(), D=D)


@pytest.fixture
def r1():
    # A = lambda - 2, B = C = 1, D = lambda; zeros {1, 1}
    return Realization(
        A=MatrixPolynomial.from_scalars(-2, 1),
        B=np.array([[1.0]]),
        C=np.array([[1.0]]),
        D=MatrixPolynomial.from_scalars(0, 1),
    )


@pytest.fixture
def r2():
    # A = lambda^2 + 1, B = C = 1, D = lambda; zeros = roots of lambda^3+lambda+1
    return Realization(
        A=MatrixPolynomial.from_scalars(1, 0, 1),
        B=np.array([[1.0]]),
        C=np.array([[1.0]]),
        D=MatrixPolynomial.from_scalars(0, 1),
    )

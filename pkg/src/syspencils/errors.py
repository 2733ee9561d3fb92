"""Exception types raised across the package."""


class PencilError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(PencilError):
    """Shapes or block partitions are inconsistent."""


class PoleError(PencilError):
    """Evaluation point is (numerically) a pole of the transfer function."""


class StructureError(PencilError):
    """Realization fails a required structural property (symmetry, ...)."""


class NotAMember(PencilError):
    """Pencil is not in the requested ansatz space to tolerance."""


class DegenerateFit(PencilError):
    """Ansatz vector cannot be identified (degenerate coefficient data)."""


class InterpolationError(PencilError):
    """Determinant interpolation failed (overflow or non-finite values)."""


class ZeroPolynomial(PencilError):
    """Scalar polynomial is identically zero; roots are undefined."""


class SingularSystem(PencilError):
    """det S(lambda) vanishes identically; the system has no zero polynomial."""


class SolverFailure(PencilError):
    """Generalized eigensolver did not converge."""


class ZeroAnsatz(PencilError):
    """Ansatz vector is zero; the reduction requires v != 0 and w != 0."""


class DegenerateVector(PencilError):
    """Vector lacks the structure needed for eigenvector recovery."""


class SingularBasis(PencilError):
    """Polynomial basis specification does not yield a nonsingular map."""

"""Exception types shared across the package."""


class BsscError(ValueError):
    """Base class for all library-specific errors."""


class SingularMatrixError(BsscError):
    """Matrix inversion requested for a rank-deficient matrix."""


class RankDeficientError(BsscError):
    """Input matrix does not have full column rank."""


class NotInvertibleError(BsscError):
    pass


class NotSymmetricError(BsscError):
    pass


class NotSymplecticError(BsscError):
    pass


class NotIsotropicError(BsscError):
    """Generator rows are not pairwise orthogonal under the symplectic form."""


class DependentRowsError(BsscError):
    pass


class LengthMismatchError(BsscError):
    """Complex vector length does not match 2**m."""


class InsufficientSupportError(BsscError):
    """Too few independent spectrum lines to span the hypothesised subspace."""


class EmptySupportError(BsscError):
    """No signal index rises above the detection threshold."""


class DegenerateLSWarning(RuntimeWarning):
    """Least-squares refit hit a rank-deficient candidate matrix."""


class ConfigError(BsscError):
    """Invalid experiment configuration."""

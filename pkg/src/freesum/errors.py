"""Exception hierarchy shared by every module."""


class FreesumError(Exception):
    """Base class for all errors raised by the package."""


class DimensionError(FreesumError, ValueError):
    """Shapes or ambient dimensions do not match."""


class DomainError(FreesumError, ValueError):
    """An input lies outside the domain of an operation (non-integer, duplicate abscissa...)."""


class LowerDimensionalError(DimensionError):
    """A point set does not span its ambient space.

    ``affine_dim`` carries the affine dimension that was found so that callers
    can project and retry.
    """

    def __init__(self, affine_dim, ambient_dim):
        self.affine_dim = affine_dim
        self.ambient_dim = ambient_dim
        super().__init__(
            f"point set has affine dimension {affine_dim} in ambient dimension {ambient_dim}"
        )


class UnboundedDualError(FreesumError, ValueError):
    """The origin is not an interior point, so the polar dual is unbounded."""


class BudgetExceededError(FreesumError, RuntimeError):
    """A desk-scale resource guard was hit."""


class InternalConsistencyError(FreesumError, RuntimeError):
    """Two independent computations disagree; this signals a bug."""

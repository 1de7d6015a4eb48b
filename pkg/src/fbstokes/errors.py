"""Exception types shared across the package."""


class FBStokesError(Exception):
    """Base class for all library errors."""


class BranchCutError(FBStokesError):
    """lambda/mu + A^2 landed on the closed negative real axis, so the
    principal square root is ambiguous (parameter outside the sector)."""


class SingularLopatinskiError(FBStokesError):
    """|(B - A) D(A, B)| too small to invert the boundary system."""


class EKappaNearZeroError(FBStokesError):
    """The surface-tension symbol E_kappa is numerically zero."""


class FDStepError(FBStokesError):
    """Finite-difference noise dominates: Richardson levels disagree."""


class EmptyGridError(FBStokesError):
    """A sweep or bound estimate was asked for on an empty grid."""


class DeltaViolationError(FBStokesError):
    """A displacement gradient exceeded its declared smallness bound."""


class RankDeficiencyError(FBStokesError):
    """Chart derivative matrix is rank deficient (not an immersion)."""


class PoleProximityError(FBStokesError):
    """Spherical chart evaluated too close to a coordinate pole."""


class UnsupportedSurfaceError(FBStokesError):
    """Operation only implemented for the sphere reference configuration."""


class DegenerateNormalError(FBStokesError):
    """Pushed-forward normal has vanishing length."""


class SupportTouchesBoundaryError(FBStokesError):
    """Field support reaches the half-space boundary; extensions would
    lose smoothness."""


class QuadratureUnderresolvedWarning(UserWarning):
    """Quadrature rule looks too coarse for the requested field."""


class ConfigError(FBStokesError):
    """Malformed run configuration; carries the offending key."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key

"""Exception and warning types shared across the package."""


class PFCError(Exception):
    """Base class for all package-specific errors."""


class InvalidParam(PFCError):
    """An argument is outside the documented domain."""


class NonFinite(PFCError):
    """An array contains NaN or infinity where finite values are required."""


class NotSymmetric(PFCError):
    """A matrix exceeds the absolute asymmetry tolerance."""


class NotPositiveDefinite(PFCError):
    """A matrix required to be symmetric positive definite is not."""


class RankDeficient(PFCError):
    """A matrix required to have full column rank does not."""


class DimensionMismatch(PFCError):
    """Operand shapes are inconsistent."""


class DegenerateResponses(PFCError):
    """Response values cannot support the requested feature construction."""


class DegenerateSpectrum(PFCError):
    """Eigenvalue spacings collapse where strict separation is required."""


class BoundUndefined(PFCError):
    """A closed-form bound is outside its own validity region.

    This is a first-class outcome, not a failure: several bounds are
    asymptotic and legitimately have no value at small sample sizes or
    loose confidence levels.
    """


class LevelCrossing(PFCError):
    """A perturbed eigenvector cannot be matched one-to-one to its base."""


class IllConditioned(PFCError):
    """A linear system is too ill-conditioned to solve reliably."""


class NotOrthogonal(PFCError):
    """Matrices required to have orthogonal column spaces do not."""


class UnsupportedFyKind(PFCError):
    """The requested closed form exists only for some feature kinds."""


class ConfigError(PFCError):
    """A CLI or JSON configuration is malformed."""


class UnknownSuite(PFCError):
    """The requested check suite does not exist."""


class SpacingDegenerateWarning(UserWarning):
    """Trailing eigenvalue spacing is too small to identify the subspace."""


class SmallSampleWarning(UserWarning):
    """Sample size is small relative to the ambient dimension."""

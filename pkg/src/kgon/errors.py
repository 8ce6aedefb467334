"""Exception hierarchy shared across the package.

``exit_code`` mirrors the CLI contract: 2 for malformed input or
configuration, 3 for numeric failures discovered mid-computation.
"""


class KgonError(Exception):
    exit_code = 3


class InputError(KgonError):
    """Unreadable or malformed input file."""

    exit_code = 2


class TooFewPoints(InputError):
    """Fewer than four distinct points after cleanup."""


class DegenerateContour(InputError):
    """All points collinear; no enclosed area."""


class BadK(InputError):
    """Requested vertex count outside [4, K]."""


class WindowTooLarge(InputError):
    """Smoothing window not smaller than the contour size."""


class TooFewRows(InputError):
    """Not enough observations to fit or cross-validate."""


class SingletonCategory(InputError):
    """Holding out the category leaves an unfittable training set."""


class MissingFeature(InputError):
    """Prediction requested a feature the row does not carry."""


class DegenerateDerivative(KgonError):
    """Vanishing first derivative; curvature undefined."""


class FlatContour(KgonError):
    """No absolute curvature to distribute among sampling points."""


class ZeroNorm(KgonError):
    """Configuration collapses to a single point; no shape."""


class NoFeasibleK(KgonError):
    """No vertex count up to K meets the requested threshold."""


class RankDeficient(KgonError):
    """Collinear design matrix; coefficients not identifiable."""

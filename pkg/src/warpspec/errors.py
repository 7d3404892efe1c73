"""Error taxonomy shared by all warpspec modules.

Every exception carries a module-qualified ``code`` string that CLI reports
propagate verbatim, so failures stay identifiable after serialization.
"""

from __future__ import annotations

__all__ = [
    "WarpspecError",
    "UnknownFamily",
    "NonMonotoneParameters",
    "NonPositiveG",
    "GridTooCoarse",
    "ConvergenceFailure",
    "GridMismatch",
    "NonMonotoneWarp",
    "ResampleOutOfRange",
    "NyquistViolation",
    "RangeTooNarrow",
    "BadPotential",
    "LinearSolveFailure",
    "ConfigParseError",
    "CheckFailed",
    "InsufficientRuns",
    "StabilityHeuristicViolated",
]


class WarpspecError(Exception):
    """Base class; ``code`` is a stable machine-readable identifier."""

    code = "warpspec/error"

    def __init__(self, message: str, *, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class UnknownFamily(WarpspecError):
    code = "warp/unknown-family"


class NonMonotoneParameters(WarpspecError):
    """Catalog parameters that cannot yield a strictly increasing warp."""

    code = "warp/non-monotone-parameters"


class NonPositiveG(WarpspecError):
    """Sampled rate must be strictly positive everywhere."""

    code = "warp/non-positive-g"


class GridTooCoarse(WarpspecError):
    """Quadrature self-estimate on sampled rates exceeded tolerance."""

    code = "warp/grid-too-coarse"


class ConvergenceFailure(WarpspecError):
    code = "warpspec/convergence-failure"


class GridMismatch(WarpspecError):
    """Requested spectral grid is not supported by the sampling in hand."""

    code = "transforms/grid-mismatch"


class NonMonotoneWarp(WarpspecError):
    """Operation needs g > 0 on its window and the warp does not deliver it."""

    code = "transforms/non-monotone-warp"


class ResampleOutOfRange(WarpspecError):
    """Resampling positions fell outside the sampled window."""

    code = "transforms/resample-out-of-range"


class NyquistViolation(WarpspecError):
    """Requested sampling cannot resolve the integrand's oscillation."""

    code = "distributions/nyquist-violation"


class RangeTooNarrow(WarpspecError):
    """Truncated warp range cannot cover the test function's bandwidth."""

    code = "distributions/range-too-narrow"


class BadPotential(WarpspecError):
    code = "schrodinger/bad-potential"


class LinearSolveFailure(WarpspecError):
    code = "schrodinger/linear-solve-failure"


class ConfigParseError(WarpspecError):
    code = "cli/config-parse-error"


class CheckFailed(WarpspecError):
    """Raised by raise_on_failure when a report contains failed checks."""

    code = "cli/check-failed"


class InsufficientRuns(WarpspecError):
    """Convergence table needs at least three distinct refinement points."""

    code = "cli/insufficient-runs"


class StabilityHeuristicViolated(UserWarning):
    """Warning (not an error): dt * ||H|| exceeded the comfort threshold."""

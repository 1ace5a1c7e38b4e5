"""Exception types shared across the package."""

from __future__ import annotations


class HypkitError(Exception):
    """Base class; the CLI maps these to exit code 1."""

    code = "domain_error"


class DegenerateCrossRatio(HypkitError):
    code = "degenerate_cross_ratio"


class NotLoxodromic(HypkitError):
    code = "not_loxodromic"


class WrongAxis(HypkitError):
    code = "wrong_axis"


class IdentityInput(HypkitError):
    code = "identity_input"


class NotPerpendicular(HypkitError):
    code = "not_perpendicular"


class SharedEndpoint(HypkitError):
    code = "shared_endpoint"


class DegenerateSide(HypkitError):
    code = "degenerate_side"


class InconsistentWidths(HypkitError):
    code = "inconsistent_widths"


class NotFactorizable(HypkitError):
    code = "not_factorizable"


class AmbiguousBranch(HypkitError):
    code = "ambiguous_branch"


class AxisDegenerate(HypkitError):
    code = "axis_degenerate"


class HypothesisViolated(HypkitError):
    code = "hypothesis_violated"


class IndexMismatch(HypkitError):
    code = "index_mismatch"


class NotAFlow(HypkitError):
    code = "not_a_flow"


class NotIntegral(HypkitError):
    code = "not_integral"


class InvalidTiling(HypkitError):
    code = "invalid_tiling"


class DomainError(HypkitError):
    code = "domain_error"


class AlphaTooLarge(HypkitError):
    code = "alpha_too_large"


class NotShortSide(HypkitError):
    code = "not_short_side"


class ConstructionFailed(HypkitError):
    code = "construction_failed"

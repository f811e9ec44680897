"""Exception hierarchy shared by all ardlkit modules."""


class ArdlkitError(Exception):
    """Base class for all errors raised by this package."""


# --- series / panel construction ---

class EmptyOverlap(ArdlkitError):
    """No common date coverage across the series being aligned."""


class LeadingGap(ArdlkitError):
    """A series starts after the requested range and cannot be filled."""


class NonPositiveLog(ArdlkitError):
    """Log transform requested on a series with non-positive values."""


class InsufficientLength(ArdlkitError):
    """Series too short for the requested difference/lag order."""


# --- regression ---

class DimensionMismatch(ArdlkitError):
    """Design and response shapes are incompatible."""


class RankDeficient(ArdlkitError):
    """Design matrix is rank deficient.

    ``columns`` names the offending columns when they can be identified.
    """

    def __init__(self, columns=()):
        self.columns = tuple(columns)
        msg = "design matrix is rank deficient"
        if self.columns:
            msg += ": " + ", ".join(self.columns)
        super().__init__(msg)


class TooFewObservations(ArdlkitError):
    """Not enough usable rows for the requested model."""


# --- unit-root tests ---

class TooShort(ArdlkitError):
    """Series too short for the requested unit-root test."""


class DegenerateAfterDetrend(ArdlkitError):
    """GLS detrending left a numerically zero series (exact deterministic input)."""


# --- ARDL / ECM ---

class NearSingularAdjustment(ArdlkitError):
    """Speed of adjustment is numerically zero; long-run coefficients undefined."""


class DummyOutsideSample(ArdlkitError):
    """Step-dummy break date falls outside (or too close to the edge of) the sample."""


class MissingBoundsEntry(ArdlkitError):
    """No embedded bounds-table entry for the requested (case, k)."""


class I2VariableDetected(ArdlkitError):
    """A variable classified as I(2) or beyond blocks the bounds test."""

    def __init__(self, names):
        self.names = tuple(names)
        super().__init__(
            "variables integrated of order 2 or beyond: " + ", ".join(self.names)
        )


# --- Monte Carlo ---

class InvalidDgp(ArdlkitError):
    """Data-generating-process parameters violate their constraints."""


# --- pipeline / CLI ---

class ParseError(ArdlkitError):
    """Manifest or model-config file failed validation."""


class UnknownVariable(ArdlkitError):
    """A model references a series absent from the manifest."""

    def __init__(self, model_id, name):
        self.model_id = model_id
        self.name = name
        super().__init__(f"model {model_id!r} references unknown series {name!r}")

"""Exception types raised by the library."""


class StableRDError(Exception):
    """Base class for domain errors raised by this package."""


class QuadratureFailure(StableRDError):
    """A numerical integration routine could not meet its tolerance."""


class AlphaMismatch(StableRDError):
    """Two stable laws with different stability indices were combined."""


class ZeroScale(StableRDError):
    """A scaling by zero was requested where a nondegenerate law is required."""


class NonFiniteLogMoment(StableRDError):
    """The log-moment tail integral of a source diverges numerically."""


class BracketFailure(StableRDError):
    """Root bracketing did not find a sign change within its expansion budget."""


class InvalidDistortion(StableRDError):
    """A distortion value outside the admissible range was supplied."""


class NotSorted(StableRDError):
    """An input array that must be strictly increasing was not."""


class NonSymmetricSource(StableRDError):
    """Quantizer design requires a source that is unimodal and symmetric about 0."""


class OutOfRange(StableRDError):
    """A parameter fell outside its admissible open interval."""


class DegenerateDesignWarning(UserWarning):
    """Two representation points collapsed onto each other during design."""

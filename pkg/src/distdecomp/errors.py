"""Exception hierarchy shared by every module."""


class DistDecompError(Exception):
    """Base class for toolkit errors."""


class DegreeCapError(DistDecompError):
    """A polynomial exceeded the configured degree cap."""


class ImproperError(DistDecompError):
    """An operation required a proper (causal) transfer function."""


class StructuralSingularityError(DistDecompError):
    """``I - lambda * G22`` is singular as a rational matrix."""

    def __init__(self, message, lam=None):
        super().__init__(message)
        self.lam = lam


class RankDeficientError(DistDecompError):
    """A transfer matrix expected to have full normal rank does not."""


class RefusedError(DistDecompError):
    """The toolkit cannot decide the question (degenerate structure)."""

    def __init__(self, message, diagnostic=None):
        super().__init__(message)
        self.diagnostic = diagnostic or {}


class NotFactorableError(DistDecompError):
    """An estimator does not satisfy the cascade factoring conditions."""

    def __init__(self, message, determinant=None, reason=""):
        super().__init__(message)
        self.determinant = determinant
        self.reason = reason


class AlgebraicLoopError(DistDecompError):
    """A realization has direct feedthrough around a feedback loop."""


class CatalogError(DistDecompError, KeyError):
    """Unknown catalog entry or out-of-range parameter."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class NetworkError(DistDecompError):
    """A network could not be built with the requested properties."""


class InputSignalError(DistDecompError, ValueError):
    """Consensus input signals violate the constant-mean requirement."""


class PreconditionError(DistDecompError, ValueError):
    """An input failed a documented precondition (e.g. its certificate)."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate

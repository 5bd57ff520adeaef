class FockgateError(Exception):
    """Base class for fockgate exceptions."""


class InvalidParameterError(FockgateError, ValueError):
    """A physical or numerical parameter is outside its admissible range."""


class DimensionError(FockgateError, ValueError):
    """Fock index outside the basis, or mismatching cutoffs/shapes."""


class CutoffTooSmallError(FockgateError):
    """Truncation of the number basis loses more weight than tolerated."""


class NumericConvergenceError(FockgateError):
    """An iterative numeric procedure did not reach its tolerance."""


class UnknownFileExtensionError(FockgateError):
    """File extension does not pertain to any known report format."""


class UnknownFormatIdentifierError(FockgateError):
    """Unknown report format identifier (ie. string like ``"csv"``)."""


class VerificationError(FockgateError):
    """At least one verification check failed its tolerance."""


class FormatAutodetectionError(FockgateError):
    """Report format is ambiguous or unknown."""

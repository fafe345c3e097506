"""Exception types raised across the package."""


class GAError(ValueError):
    """Base class for all errors raised by gaaf."""


class SignatureMismatch(GAError):
    pass


class GradeOutOfRange(GAError):
    pass


class UnsupportedSignature(GAError):
    """Operation is only defined for Euclidean signatures (q = r = 0)."""


class NullVector(GAError):
    pass


class FactorizationMismatch(GAError):
    pass


class NotUnit(GAError):
    pass


class NotUnitRotor(GAError):
    pass


class NotEven(GAError):
    pass


class LengthMismatch(GAError):
    pass


class MaskViolation(GAError):
    pass


class Unstable(GAError):
    """Step size violates the mean-square stability condition of the theory."""


class CurveTooShort(GAError):
    pass

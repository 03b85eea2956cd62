"""Exception hierarchy shared by every module in the package."""


class HiranoError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(HiranoError, ValueError):
    pass


class NotSquare(DimensionMismatch):
    pass


class ArityMismatch(DimensionMismatch):
    pass


class ParseError(HiranoError, ValueError):
    pass


class NonexistentInverse(HiranoError):
    """The requested generalized inverse or splitting does not exist."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotHirano(NonexistentInverse):
    pass


class NotStronglyDrazin(NonexistentInverse):
    pass


class HypothesesFail(HiranoError):
    pass


class BadInverse(HiranoError):
    """A caller-supplied inverse fails its defining equations."""


class CertificateFailure(HiranoError):
    """An internal self-check failed. Always a bug or a refuted formula."""


class IterationCapExceeded(CertificateFailure):
    pass


class SingularNewtonStep(HiranoError):
    pass


class GenerationFailure(HiranoError):
    pass

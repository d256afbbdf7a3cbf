"""Exception hierarchy shared by all modules."""


class ConeliftError(Exception):
    pass


class ConvergenceError(ConeliftError):
    """An iterative method hit its iteration cap."""


class NotRealRootedError(ConeliftError):
    """A polynomial promised to be real-rooted has non-real roots."""

    def __init__(self, msg, roots=None, n_missing=None):
        super().__init__(msg)
        self.roots = roots
        self.n_missing = n_missing


class HyperbolicityDirectionError(ConeliftError):
    """p(e) <= 0, so e cannot be a hyperbolicity direction."""


class NotInConeError(ConeliftError, ValueError):
    pass


class DualOracleUnavailable(ConeliftError, NotImplementedError):
    pass


class UnsupportedConeError(ConeliftError, NotImplementedError):
    pass


class CertificateRejected(ConeliftError):
    pass


class BudgetExceeded(ConeliftError):
    """A brute-force enumeration or big-integer computation was refused."""


class HypothesisViolation(ConeliftError):
    """Input data does not satisfy the hypotheses an operation relies on."""


class SplittingFailed(ConeliftError):
    pass


class DecompositionNotFound(ConeliftError):
    def __init__(self, msg, trace=None):
        super().__init__(msg)
        self.trace = trace or []

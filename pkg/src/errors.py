class TransversalLabError(Exception):
    """Base class for every error raised by the library."""


class UniverseTooLarge(TransversalLabError):
    """A CNF would need more than 64 variables."""


class McnfFormatError(TransversalLabError):
    """Malformed MCNF v1 text."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f'line {line_number}: {message}')


class InvalidSpec(TransversalLabError):
    """A block or family specification is outside its validity range."""


class CombinedUniverseTooLarge(UniverseTooLarge):
    """A disjoint sum would exceed the variable limit."""


class OutOfValidity(TransversalLabError):
    """A bound query lies outside the region where the bound is proved."""


class NegativeResult(TransversalLabError):
    """Inputs to a counting identity are inconsistent."""


class NoPropertyFound(TransversalLabError):
    """No branching property of the given type matches the CNF."""


class TypeMismatch(TransversalLabError):
    """A restricted CNF has a weaker type than its case table claims."""


class PreconditionTauMismatch(TransversalLabError):
    """The requested size differs from the transversal number."""

    def __init__(self, tau: int, t: int):
        self.tau = tau
        self.t = t
        super().__init__(f'transversal number is {tau}, requested t={t}')


class TooLarge(TransversalLabError):
    """Exhaustive search requested beyond its supported size."""


class SeedMismatch(TransversalLabError):
    """A circuit seed does not have the requested transversal number."""


class UnknownTheta(TransversalLabError):
    """No exact value of the extremal count is known for (n, t)."""

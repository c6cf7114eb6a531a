"""Exception types shared across the library.

Every failure mode raised by the public API is one of these classes, so
callers (and the CLI) can distinguish bad inputs from numerical trouble.
"""


class GraphConcError(Exception):
    """Base class for all library errors."""


class NonFinite(GraphConcError, ValueError):
    """A matrix or scalar input contains NaN or infinity."""


class DimensionMismatch(GraphConcError, ValueError):
    """Operands have incompatible shapes."""


class ConvergenceFailure(GraphConcError, RuntimeError):
    """The eigensolver did not converge."""


class Overflow(GraphConcError, ArithmeticError):
    """A matrix exponential produced non-finite entries."""


class InvalidParameter(GraphConcError, ValueError):
    """A scalar parameter is outside its documented range."""


class DomainError(GraphConcError, ValueError):
    """An argument left the open domain of an entropy/bound formula."""


class NotPSD(GraphConcError, ValueError):
    """A matrix required to be positive semi-definite is not."""


class NormTooLarge(GraphConcError, ValueError):
    """An operand exceeds the norm bound required by the operation."""


class ZeroDegree(GraphConcError, ValueError):
    """A typical degree is zero where a Laplacian is required."""


class LoopsUnsupported(GraphConcError, ValueError):
    """The graph has loops but the operation is defined for loop-free graphs."""


class TooLarge(GraphConcError, ValueError):
    """The input is larger than the brute-force enumeration cap."""


class Unsupported(GraphConcError, ValueError):
    """The kernel kind has no closed form for the requested quantity."""


class QuadratureFailure(GraphConcError, ArithmeticError):
    """A kernel evaluation inside a quadrature rule was non-finite."""


class SingularResolvent(GraphConcError, ArithmeticError):
    """A contour quadrature node is too close to an eigenvalue."""


class HypothesisViolated(GraphConcError, ValueError):
    """The inputs do not satisfy the hypothesis of the lemma being checked."""


class ConfigError(GraphConcError, ValueError):
    """An experiment configuration is invalid; message names the key."""


class IoError(GraphConcError, OSError):
    """Reading or writing an experiment artifact failed."""

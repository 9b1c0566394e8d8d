"""Exception types shared across the package."""


class So3ChainError(Exception):
    """Base class for all package errors."""


class PoleError(So3ChainError, ValueError):
    """A spectral point fell on (or too close to) a pole of a rational expression."""


class SingularError(So3ChainError, ValueError):
    """A matrix inversion was refused because the operand is (near) singular.

    Carries the offending condition-number estimate in ``cond`` and an
    optional label naming which operator degenerated.
    """

    def __init__(self, message, cond=None, which=None):
        super().__init__(message)
        self.cond = cond
        self.which = which


class NotScalarError(So3ChainError, ValueError):
    """A product expected to be a multiple of the identity was not."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DegenerateError(So3ChainError, ValueError):
    """Bethe parameters coincide (or nearly coincide)."""


class ZeroDenominatorError(So3ChainError, ZeroDivisionError):
    """A recursion prefactor vanished for the requested parameters."""


class RealityError(So3ChainError, ValueError):
    """An operation requiring real chain data received complex data."""


class NoConvergence(So3ChainError, RuntimeError):
    """The Bethe-equation solver failed to converge.

    ``trace`` holds the per-seed iteration history for diagnosis.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []


class CardinalityError(So3ChainError, ValueError):
    """A partition request asked for impossible subset cardinalities."""


class DegenerateSample(So3ChainError, ValueError):
    """A scalar-product sample was discarded because the reference value vanished."""

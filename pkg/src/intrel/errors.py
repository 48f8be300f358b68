"""Exception types shared across the package."""


class IntrelError(Exception):
    """Base class for all package-specific errors."""


class InvalidInterval(IntrelError, ValueError):
    """Interval endpoints are reversed, non-finite, or otherwise malformed."""


class DivisionByZeroInterval(IntrelError, ZeroDivisionError):
    """Divisor interval contains zero."""


class DegenerateDimension(IntrelError, ValueError):
    """Requested bisection of a point (zero-width) box component."""


class DimensionMismatch(IntrelError, ValueError):
    """Operands or model inputs have incompatible dimensions."""


class NoBisectableDimension(IntrelError, RuntimeError):
    """An undefined box cannot be split any further.

    Cannot occur for eps > 0 over finite boxes wider than a few ULP;
    guarded against anyway so a bad eps fails loudly instead of looping.
    """


class IndexOutOfRange(IntrelError, IndexError):
    """Feature, pattern, or output-node index outside the valid range."""


class ParseError(IntrelError, ValueError):
    """A data or model file could not be parsed; message carries context."""


class WrongColumnCount(ParseError):
    """CSV row has an unexpected number of columns."""


class SchemaVersionMismatch(IntrelError, ValueError):
    """Model file schema is unknown, or its content violates an invariant."""


class BadMagic(ParseError):
    """IDX file does not start with the expected magic number."""


class CountMismatch(IntrelError, ValueError):
    """Image and label files disagree on the number of patterns."""


class NonFiniteLoss(IntrelError, ArithmeticError):
    """Training loss became NaN or infinite."""

    def __init__(self, epoch: int, loss: float):
        self.epoch = epoch
        self.loss = loss
        super().__init__(f"loss became non-finite ({loss!r}) at epoch {epoch}")


class MisclassifiedInput(IntrelError, ValueError):
    """Relevance analysis was requested for a pattern the model misclassifies."""


class ConvergenceFailure(IntrelError, RuntimeError):
    """No seed in a restart list reached the training goal."""

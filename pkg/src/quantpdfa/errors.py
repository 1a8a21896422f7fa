class PdfaError(Exception):
    """Base class for errors raised by quantpdfa."""


class InputError(PdfaError, ValueError):
    """Malformed input: unknown symbol, bad probability, bad parameter."""


class ContractViolation(PdfaError):
    """An operation was called with arguments breaking its precondition."""


class LearningStalled(PdfaError, RuntimeError):
    """A tolerance-based learner received a counterexample it cannot use."""

"""Exception hierarchy shared by every module of the package."""


class CondensingError(Exception):
    """Base class for all library errors."""


class LatticeError(CondensingError):
    """Raised when a carrier plus order does not form a complete lattice."""


class CarrierError(CondensingError):
    """An element was used with a lattice or carrier it does not belong to."""


class AmbientMismatch(CondensingError):
    """Two values that must share an ambient lattice do not."""


class SizeLimitError(CondensingError):
    """A construction needs to enumerate a carrier larger than allowed."""


class IterationCapError(CondensingError):
    """A fixpoint iteration did not stabilize within the configured cap."""


class PoolExhaustedError(CondensingError):
    """Not enough auxiliary variables to rename a clause apart."""

    def __init__(self, needed, available):
        super().__init__(
            f"auxiliary variable pool exhausted: need {needed} fresh "
            f"variable(s), {available} available")
        self.needed = needed
        self.available = available


class PreconditionError(CondensingError):
    """An operation was called outside its documented domain."""


class ParseError(CondensingError):
    """Syntax or validation error in one of the text formats."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)
        self.message = message
        self.line = line
        self.column = column

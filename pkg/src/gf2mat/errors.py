"""Exception classes shared across the library."""


class GF2MatError(ValueError):
    """Base class for all library errors."""


class DimensionError(GF2MatError):
    """Operand shapes are incompatible for the requested operation."""


class AlignmentError(GF2MatError):
    """A window column offset is not a multiple of the word size."""


class ParameterError(GF2MatError):
    """A tuning or algorithm parameter is outside its legal range."""


class FormatError(GF2MatError):
    """A matrix file is malformed; the message names the byte offset."""

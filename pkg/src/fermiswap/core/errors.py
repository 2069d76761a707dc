"""Exception hierarchy shared by all fermiswap modules"""


class FermiSwapError(Exception):
    """Base class for every error raised by fermiswap"""


class InputValidationError(FermiSwapError, ValueError):
    """Input violates a documented precondition (shape, symmetry, unitarity, ...)"""


class SchemaError(InputValidationError):
    """A JSON input file does not match its schema"""


class SizeLimitError(FermiSwapError):
    """A dense oracle was asked for more qubits than it supports"""


class BranchCutError(FermiSwapError):
    """Matrix logarithm is ambiguous (eigenvalue at -1)"""


class VerificationError(FermiSwapError):
    """A synthesized circuit failed its oracle check"""


class SynthesisError(FermiSwapError):
    """A synthesis routine failed to reach its target form"""

from .config_loader import ConfigLoader, FrameworkConfig, RunConfig, DEFAULT_CONFIG
from .errors import (
    BranchCutError,
    FermiSwapError,
    InputValidationError,
    SchemaError,
    SizeLimitError,
    SynthesisError,
    VerificationError,
)

__all__ = [
    "ConfigLoader", "FrameworkConfig", "RunConfig", "DEFAULT_CONFIG",
    "BranchCutError", "FermiSwapError", "InputValidationError",
    "SchemaError", "SizeLimitError", "SynthesisError", "VerificationError",
]

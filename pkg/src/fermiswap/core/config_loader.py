import math
import os
import yaml
from pathlib import Path
from typing import Literal, Optional
from pydantic import BaseModel, Field, field_validator, model_validator
from ..utils.logger import logger

SEED_ENV_VAR = "FERMISWAP_SEED"

Command = Literal["synth-trotter", "synth-slater", "synth-hubbard", "verify", "stats"]


class ToleranceConfig(BaseModel):
    """Numerical tolerances used by validators and oracles"""
    symmetry: float = Field(1e-12, gt=0)
    unitarity: float = Field(1e-10, gt=0)
    orthonormality: float = Field(1e-10, gt=0)
    zero_pivot: float = Field(1e-14, gt=0)
    branch_cut: float = Field(1e-8, gt=0)


class LimitConfig(BaseModel):
    """Size caps for the dense oracles"""
    max_dense_qubits: int = Field(12, ge=1)
    max_trotter_reference_qubits: int = Field(10, ge=1)
    max_thouless_modes: int = Field(10, ge=1)
    max_slater_modes: int = Field(16, ge=1)


class DefaultsConfig(BaseModel):
    """Defaults for command-line options"""
    t: float = 0.01
    order: int = 1
    steps: int = Field(1, ge=1)
    tol: float = Field(1e-10, gt=0)
    threads: int = Field(1, ge=1)
    seed: int = 0


class LoggingConfig(BaseModel):
    level: str = "INFO"


class FrameworkConfig(BaseModel):
    """Main fermiswap configuration"""
    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)
    limits: LimitConfig = Field(default_factory=LimitConfig)
    defaults: DefaultsConfig = Field(default_factory=DefaultsConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    class Config:
        extra = "ignore"


DEFAULT_CONFIG = FrameworkConfig()


class RunConfig(BaseModel):
    """Validated options of one CLI invocation"""
    command: Command
    input_path: Optional[Path] = None
    output_path: Optional[Path] = None
    t: float = DEFAULT_CONFIG.defaults.t
    order: int = DEFAULT_CONFIG.defaults.order
    steps: int = DEFAULT_CONFIG.defaults.steps
    seed: int = DEFAULT_CONFIG.defaults.seed
    tolerance: float = DEFAULT_CONFIG.defaults.tol
    threads: int = DEFAULT_CONFIG.defaults.threads
    verbose: bool = False
    config_dir: Path = Path("./config")

    @field_validator('t')
    @classmethod
    def validate_time(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError(f"Time step must be finite, got {v}")
        return v

    @field_validator('order')
    @classmethod
    def validate_order(cls, v: int) -> int:
        if v not in (1, 2, 4):
            raise ValueError(f"Trotter order must be 1, 2 or 4, got {v}")
        return v

    @field_validator('steps')
    @classmethod
    def validate_steps(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"Step count must be at least 1, got {v}")
        return v

    @field_validator('tolerance')
    @classmethod
    def validate_tolerance(cls, v: float) -> float:
        if not (v > 0 and math.isfinite(v)):
            raise ValueError(f"Tolerance must be positive, got {v}")
        return v

    @field_validator('threads')
    @classmethod
    def validate_threads(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"Thread count must be at least 1, got {v}")
        return v

    @model_validator(mode='after')
    def apply_seed_override(self) -> 'RunConfig':
        env_seed = os.environ.get(SEED_ENV_VAR)
        if env_seed is not None:
            try:
                self.seed = int(env_seed)
            except ValueError as e:
                raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {env_seed!r}") from e
        return self


class ConfigLoader:
    """Load and manage fermiswap configuration"""

    def __init__(self, config_dir: str = "./config"):
        self.config_dir = Path(config_dir)
        self.config: Optional[FrameworkConfig] = None

    def load(self) -> FrameworkConfig:
        """Load configuration from YAML, falling back to built-in defaults"""

        config_path = self.config_dir / "fermiswap.yaml"
        if not config_path.exists():
            logger.debug(f"No configuration at {config_path}, using defaults")
            self.config = FrameworkConfig()
            return self.config

        with open(config_path, 'r') as f:
            data = yaml.safe_load(f) or {}

        self.config = FrameworkConfig(**data)
        logger.debug(f"Loaded configuration from {config_path}")

        return self.config

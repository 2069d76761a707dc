from typing import Any, Dict, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class GivensRotation(BaseModel):
    """Phased Givens rotation of rows (p, p+1)"""
    model_config = ConfigDict(frozen=True)

    p: int = Field(ge=0)
    theta: float
    phase: float = 0.0
    column: int = Field(default=-1, description="Column whose entry the rotation zeroed")

    @property
    def q(self) -> int:
        return self.p + 1


class GivensPlan(BaseModel):
    """Parallel layers of nearest-neighbour rotations diagonalizing a unitary.

    Applying every rotation, layer by layer, to u from the left gives
    diag(exp(1j * diag_phases)).
    """
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    layers: Tuple[Tuple[GivensRotation, ...], ...] = Field(default_factory=tuple)
    diag_phases: Tuple[float, ...]

    @model_validator(mode='after')
    def validate_plan(self) -> 'GivensPlan':
        if len(self.diag_phases) != self.n:
            raise ValueError(f"Expected {self.n} diagonal phases, got {len(self.diag_phases)}")
        for index, layer in enumerate(self.layers):
            rows = set()
            for r in layer:
                if r.q >= self.n:
                    raise ValueError(f"Layer {index}: rotation rows ({r.p}, {r.q}) out of range")
                if r.p in rows or r.q in rows:
                    raise ValueError(f"Layer {index}: rotations share a row")
                rows.update((r.p, r.q))
        if self.rotation_count > self.n * (self.n - 1) // 2:
            raise ValueError("Plan has more rotations than sub-diagonal entries")
        return self

    @property
    def rotation_count(self) -> int:
        return sum(len(layer) for layer in self.layers)

    @property
    def depth(self) -> int:
        return len(self.layers)


class SlaterDeterminant(BaseModel):
    """eta occupied orbitals; row i of Q holds the mode coefficients of orbital i"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    Q: np.ndarray
    tolerance: float = 1e-10

    @field_validator('Q', mode='before')
    @classmethod
    def to_complex_array(cls, v: Any) -> np.ndarray:
        array = np.array(v, dtype=complex)
        if array.ndim == 1:
            array = array[np.newaxis, :]
        array.setflags(write=False)
        return array

    @model_validator(mode='after')
    def validate_orbitals(self) -> 'SlaterDeterminant':
        if self.Q.ndim != 2:
            raise ValueError(f"Q must be a matrix, got shape {self.Q.shape}")
        eta, n = self.Q.shape
        if not 1 <= eta <= n:
            raise ValueError(f"Need 1 <= eta <= n, got eta={eta}, n={n}")
        if not np.all(np.isfinite(self.Q)):
            raise ValueError("Q contains non-finite entries")
        overlap = self.Q @ self.Q.conj().T
        error = np.max(np.abs(overlap - np.eye(eta)))
        if error > self.tolerance:
            raise ValueError(f"Rows of Q are not orthonormal (max deviation {error:.3e})")
        return self

    @property
    def eta(self) -> int:
        return self.Q.shape[0]

    @property
    def n(self) -> int:
        return self.Q.shape[1]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "eta": self.eta,
            "re": [float(x) for x in self.Q.real.ravel()],
            "im": [float(x) for x in self.Q.imag.ravel()],
        }

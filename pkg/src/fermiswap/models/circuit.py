import math
from typing import Any, Dict, Iterator, List, Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..core.errors import InputValidationError
from ..utils.file_utils import validate_document
from .schemas import CIRCUIT_SCHEMA

GateKind = Literal["fsim", "givens", "phase", "fswap"]

# kind -> (qubit count, accepted parameter counts)
GATE_ARITY: Dict[str, Tuple[int, Tuple[int, ...]]] = {
    "fsim": (2, (2, 3)),
    "givens": (2, (2,)),
    "phase": (1, (1,)),
    "fswap": (2, (0,)),
}


class Gate(BaseModel):
    """A single gate on a linear chain of qubits.

    fsim params are [theta, phi, swap]; swap=1 is the full fermionic simulation
    gate, swap=0 is the same interaction with the exchange cancelled.
    givens params are [theta, phase], phase params are [angle].
    Two-qubit gates act on an ascending adjacent pair (p, p+1).
    """
    model_config = ConfigDict(frozen=True)

    kind: GateKind
    qubits: Tuple[int, ...]
    params: Tuple[float, ...] = Field(default_factory=tuple)

    @model_validator(mode='before')
    @classmethod
    def default_swap_flag(cls, data: Any) -> Any:
        # fsim written with two params is the swapping variant
        if isinstance(data, dict) and data.get("kind") == "fsim":
            params = tuple(data.get("params", ()))
            if len(params) == 2:
                data = {**data, "params": (*params, 1.0)}
        return data

    @field_validator('params')
    @classmethod
    def validate_params(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        for value in v:
            if not math.isfinite(value):
                raise ValueError(f"Gate angle must be finite, got {value}")
        return v

    @model_validator(mode='after')
    def validate_shape(self) -> 'Gate':
        n_qubits, n_params = GATE_ARITY[self.kind]
        if len(self.qubits) != n_qubits:
            raise ValueError(f"{self.kind} gate acts on {n_qubits} qubit(s), got {list(self.qubits)}")
        if len(self.params) not in n_params:
            raise ValueError(f"{self.kind} gate takes {n_params} parameters, got {len(self.params)}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"Negative qubit index in {list(self.qubits)}")
        if n_qubits == 2 and self.qubits[1] != self.qubits[0] + 1:
            raise ValueError(f"Two-qubit gate must act on adjacent positions (p, p+1), got {list(self.qubits)}")
        if self.kind == "fsim" and len(self.params) == 3:
            if self.params[2] not in (0.0, 1.0):
                raise ValueError(f"fsim swap flag must be 0 or 1, got {self.params[2]}")
        return self

    @classmethod
    def fsim(cls, p: int, theta: float, phi: float, swap: bool = True) -> 'Gate':
        return cls(kind="fsim", qubits=(p, p + 1), params=(theta, phi, 1.0 if swap else 0.0))

    @classmethod
    def givens(cls, p: int, theta: float, phase: float) -> 'Gate':
        return cls(kind="givens", qubits=(p, p + 1), params=(theta, phase))

    @classmethod
    def phase(cls, q: int, angle: float) -> 'Gate':
        return cls(kind="phase", qubits=(q,), params=(angle,))

    @classmethod
    def fswap(cls, p: int) -> 'Gate':
        return cls(kind="fswap", qubits=(p, p + 1), params=())

    @property
    def is_two_qubit(self) -> bool:
        return len(self.qubits) == 2

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "qubits": list(self.qubits),
            "params": [float(x) for x in self.params],
        }


class Circuit(BaseModel):
    """Layered circuit; gates inside one layer have disjoint support"""
    model_config = ConfigDict(frozen=True)

    n_qubits: int = Field(ge=1)
    layers: Tuple[Tuple[Gate, ...], ...] = Field(default_factory=tuple)
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode='after')
    def validate_layers(self) -> 'Circuit':
        for index, layer in enumerate(self.layers):
            used = set()
            for gate in layer:
                for q in gate.qubits:
                    if q >= self.n_qubits:
                        raise ValueError(f"Layer {index}: qubit {q} out of range for {self.n_qubits} qubits")
                    if q in used:
                        raise ValueError(f"Layer {index}: qubit {q} used by more than one gate")
                    used.add(q)
        return self

    @property
    def depth(self) -> int:
        return len(self.layers)

    def gates(self) -> Iterator[Gate]:
        for layer in self.layers:
            yield from layer

    @property
    def two_qubit_count(self) -> int:
        return sum(1 for g in self.gates() if g.is_two_qubit)

    def with_metadata(self, **extra: Any) -> 'Circuit':
        """Copy of the circuit with metadata entries added"""
        return Circuit(n_qubits=self.n_qubits, layers=self.layers,
                       metadata={**self.metadata, **extra})

    def to_dict(self) -> Dict[str, Any]:
        """Convert to the circuit JSON layout"""
        return {
            "n_qubits": self.n_qubits,
            "layers": [[g.to_dict() for g in layer] for layer in self.layers],
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], source: str = "<circuit>") -> 'Circuit':
        """Parse and validate a circuit JSON document"""
        validate_document(data, CIRCUIT_SCHEMA, source)
        try:
            return cls(**data)
        except ValidationError as e:
            raise InputValidationError(f"{source}: invalid circuit: {e}") from e


def build_circuit(n_qubits: int, layers: List[List[Gate]], metadata: Dict[str, Any]) -> Circuit:
    """Construct a circuit, dropping empty layers"""
    kept = tuple(tuple(layer) for layer in layers if layer)
    try:
        return Circuit(n_qubits=n_qubits, layers=kept, metadata=metadata)
    except ValidationError as e:
        raise InputValidationError(f"Invalid circuit: {e}") from e

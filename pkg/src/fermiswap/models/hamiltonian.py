from typing import Any, Dict, Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Spin = Literal["up", "down", "none"]

PAULI_LABELS = frozenset("IXYZ")


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


class FermionHamiltonian(BaseModel):
    """H = sum T_pq a+_p a_q + sum U_p n_p + sum_{p!=q} V_pq n_p n_q"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n_modes: int = Field(ge=1)
    T: np.ndarray
    U: np.ndarray
    V: np.ndarray

    @field_validator('T', 'U', 'V', mode='before')
    @classmethod
    def to_readonly_array(cls, v: Any) -> np.ndarray:
        return _frozen(v)

    @model_validator(mode='after')
    def validate_tables(self) -> 'FermionHamiltonian':
        n = self.n_modes
        if self.T.shape != (n, n) or self.V.shape != (n, n) or self.U.shape != (n,):
            raise ValueError(f"Coefficient shapes {self.T.shape}, {self.U.shape}, {self.V.shape} "
                             f"do not match n_modes={n}")
        for name, table in (("T", self.T), ("U", self.U), ("V", self.V)):
            if not np.all(np.isfinite(table)):
                raise ValueError(f"{name} contains non-finite entries")
        if not np.array_equal(self.T, self.T.T) or not np.array_equal(self.V, self.V.T):
            raise ValueError("T and V must be exactly symmetric")
        if np.any(np.diag(self.V) != 0.0):
            raise ValueError("V must have zero diagonal")
        return self

    def pair_interaction(self, p: int, q: int) -> float:
        """Unordered-pair density coefficient V_pq + V_qp"""
        return float(self.V[p, q] + self.V[q, p])

    def onsite_energy(self, p: int) -> float:
        """Diagonal energy U_p + T_pp carried by the potential layer"""
        return float(self.U[p] + self.T[p, p])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_modes": self.n_modes,
            "T": [float(x) for x in self.T.ravel()],
            "U": [float(x) for x in self.U],
            "V": [float(x) for x in self.V.ravel()],
        }


class PauliHamiltonian(BaseModel):
    """Qubit Hamiltonian; label character k acts on qubit k"""
    model_config = ConfigDict(frozen=True)

    n_qubits: int = Field(ge=1)
    terms: Tuple[Tuple[str, float], ...] = Field(default_factory=tuple)
    constant_offset: float = 0.0

    @model_validator(mode='after')
    def validate_terms(self) -> 'PauliHamiltonian':
        seen = set()
        for label, coeff in self.terms:
            if len(label) != self.n_qubits or not set(label) <= PAULI_LABELS:
                raise ValueError(f"Bad Pauli label {label!r} for {self.n_qubits} qubits")
            if set(label) == {"I"}:
                raise ValueError("Identity term belongs in constant_offset")
            if label in seen:
                raise ValueError(f"Duplicate Pauli string {label}")
            if not np.isfinite(coeff):
                raise ValueError(f"Non-finite coefficient for {label}")
            seen.add(label)
        if not np.isfinite(self.constant_offset):
            raise ValueError("Non-finite constant offset")
        return self

    def as_dict(self) -> Dict[str, float]:
        return dict(self.terms)


class HubbardInstance(BaseModel):
    """2D Hubbard lattice with open boundaries, laid out on a chain.

    snake_order[k] is the (site, spin) spin-orbital sitting at chain position k;
    sites are numbered row-major from 0. hop_edges and onsite_pairs hold chain
    positions, smaller first. A spinless lattice carries one "none" orbital per
    site, no onsite pairs, and its interaction acts on the hop edges.
    """
    model_config = ConfigDict(frozen=True)

    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    t_hop: float
    u_int: float
    snake_order: Tuple[Tuple[int, Spin], ...]
    hop_edges: Tuple[Tuple[int, int], ...]
    onsite_pairs: Tuple[Tuple[int, int], ...]
    spinless: bool = False

    @model_validator(mode='after')
    def validate_layout(self) -> 'HubbardInstance':
        n_sites = self.rows * self.cols
        spins = ("none",) if self.spinless else ("up", "down")
        expected = {(s, spin) for s in range(n_sites) for spin in spins}
        if len(self.snake_order) != len(expected) or set(self.snake_order) != expected:
            raise ValueError("snake_order is not a bijection onto the spin-orbitals")
        n_onsite = 0 if self.spinless else n_sites
        if len(self.onsite_pairs) != n_onsite:
            raise ValueError(f"Expected {n_onsite} onsite pairs, got {len(self.onsite_pairs)}")
        n_edges = len(spins) * (self.rows * (self.cols - 1) + self.cols * (self.rows - 1))
        if len(self.hop_edges) != n_edges:
            raise ValueError(f"Expected {n_edges} hop edges, got {len(self.hop_edges)}")
        for p, q in self.onsite_pairs:
            if q != p + 1:
                raise ValueError(f"Onsite pair ({p}, {q}) is not chain-adjacent")
        if not (np.isfinite(self.t_hop) and np.isfinite(self.u_int)):
            raise ValueError("Hubbard couplings must be finite")
        return self

    @property
    def n_modes(self) -> int:
        return len(self.snake_order)

    def position_of(self, site: int, spin: Spin) -> int:
        return self.snake_order.index((site, spin))

    def to_dict(self) -> Dict[str, Any]:
        data = {"rows": self.rows, "cols": self.cols, "t": float(self.t_hop), "U": float(self.u_int)}
        if self.spinless:
            data["spinless"] = True
        return data

import hashlib
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
import scipy.sparse
from pydantic import ValidationError

from ..core.config_loader import DEFAULT_CONFIG
from ..core.errors import InputValidationError, SizeLimitError
from ..models.hamiltonian import FermionHamiltonian, HubbardInstance, PauliHamiltonian
from ..models.schemas import HAMILTONIAN_SCHEMA, HUBBARD_SCHEMA
from ..utils.file_utils import dump_json, dumps_fixed, load_json
from ..utils.logger import logger

SYMMETRY_TOL = DEFAULT_CONFIG.tolerances.symmetry
MAX_DENSE_QUBITS = DEFAULT_CONFIG.limits.max_dense_qubits


def build_hamiltonian(T, U, V, tol: float = SYMMETRY_TOL) -> FermionHamiltonian:
    """Validate coefficient tables and symmetrize them exactly"""
    try:
        T = np.asarray(T)
        U = np.asarray(U)
        V = np.asarray(V)
    except (TypeError, ValueError) as e:
        raise InputValidationError(f"Coefficients are not numeric arrays: {e}") from e

    if np.iscomplexobj(T) or np.iscomplexobj(U) or np.iscomplexobj(V):
        if np.any(np.imag(T) != 0) or np.any(np.imag(U) != 0) or np.any(np.imag(V) != 0):
            raise InputValidationError("Complex coefficients are not supported")
    T = np.real(T).astype(float)
    U = np.real(U).astype(float)
    V = np.real(V).astype(float)

    if U.ndim != 1:
        raise InputValidationError(f"U must be a vector, got shape {U.shape}")
    n = U.shape[0]
    if n < 1:
        raise InputValidationError("Hamiltonian needs at least one mode")
    if T.shape != (n, n) or V.shape != (n, n):
        raise InputValidationError(f"Dimension mismatch: T {T.shape}, U {U.shape}, V {V.shape}")
    for name, table in (("T", T), ("U", U), ("V", V)):
        if not np.all(np.isfinite(table)):
            raise InputValidationError(f"{name} contains non-finite entries")

    if np.max(np.abs(T - T.T)) > tol:
        raise InputValidationError(f"T is not symmetric within {tol:g}")
    if np.max(np.abs(V - V.T)) > tol:
        raise InputValidationError(f"V is not symmetric within {tol:g}")
    if np.max(np.abs(np.diag(V))) > tol:
        raise InputValidationError(f"V has nonzero diagonal entries (max {np.max(np.abs(np.diag(V))):g})")

    T = (T + T.T) / 2
    V = (V + V.T) / 2
    np.fill_diagonal(V, 0.0)

    return FermionHamiltonian(n_modes=n, T=T, U=U, V=V)


def random_hamiltonian(n: int, seed: int) -> FermionHamiltonian:
    """Deterministic random Hamiltonian with entries in [-1, 1]"""
    if n < 1:
        raise InputValidationError(f"n must be positive, got {n}")
    rng = np.random.default_rng(seed)
    T = rng.uniform(-1, 1, size=(n, n))
    U = rng.uniform(-1, 1, size=n)
    V = rng.uniform(-1, 1, size=(n, n))
    T = (T + T.T) / 2
    V = (V + V.T) / 2
    np.fill_diagonal(V, 0.0)
    return build_hamiltonian(T, U, V)


def hamiltonian_fingerprint(h: FermionHamiltonian) -> str:
    """SHA-256 of the canonical JSON form"""
    return hashlib.sha256(dumps_fixed(h.to_dict()).encode("utf-8")).hexdigest()


def load_hamiltonian(path: Path, tol: float = SYMMETRY_TOL) -> FermionHamiltonian:
    """Load a Hamiltonian JSON file"""
    data = load_json(path, HAMILTONIAN_SCHEMA)
    return hamiltonian_from_dict(data, str(path), tol)


def hamiltonian_from_dict(data: Dict, source: str = "<hamiltonian>", tol: float = SYMMETRY_TOL) -> FermionHamiltonian:
    n = data["n_modes"]
    if len(data["T"]) != n * n or len(data["U"]) != n or len(data["V"]) != n * n:
        raise InputValidationError(f"{source}: coefficient lengths do not match n_modes={n}")
    return build_hamiltonian(
        np.array(data["T"], dtype=float).reshape(n, n),
        np.array(data["U"], dtype=float),
        np.array(data["V"], dtype=float).reshape(n, n),
        tol,
    )


def dump_hamiltonian(h: FermionHamiltonian, path: Path) -> Path:
    return dump_json(h.to_dict(), path)


def jordan_wigner(h: FermionHamiltonian) -> PauliHamiltonian:
    """Pauli form with n_p = (1 - Z_p) / 2 and qubit p at chain position p"""
    n = h.n_modes
    terms: Dict[str, float] = {}
    constant = 0.0

    def add(label: List[str], coeff: float) -> None:
        key = "".join(label)
        terms[key] = terms.get(key, 0.0) + coeff

    identity = ["I"] * n

    for p in range(n):
        energy = h.onsite_energy(p)
        constant += energy / 2
        label = identity.copy()
        label[p] = "Z"
        add(label, -energy / 2)

    for p in range(n):
        for q in range(p + 1, n):
            w = h.pair_interaction(p, q)
            if w != 0.0:
                constant += w / 4
                for r in (p, q):
                    label = identity.copy()
                    label[r] = "Z"
                    add(label, -w / 4)
                label = identity.copy()
                label[p] = label[q] = "Z"
                add(label, w / 4)

            hop = float(h.T[p, q])
            if hop != 0.0:
                for axis in ("X", "Y"):
                    label = identity.copy()
                    label[p] = label[q] = axis
                    for r in range(p + 1, q):
                        label[r] = "Z"
                    add(label, hop / 2)

    kept = tuple((label, coeff) for label, coeff in terms.items() if coeff != 0.0)
    logger.debug(f"Jordan-Wigner mapped {n} modes to {len(kept)} Pauli terms")
    return PauliHamiltonian(n_qubits=n, terms=kept, constant_offset=constant)


def _pauli_masks(label: str) -> Tuple[int, int, int]:
    x_mask = y_mask = z_mask = 0
    for k, char in enumerate(label):
        if char == "X":
            x_mask |= 1 << k
        elif char == "Y":
            y_mask |= 1 << k
        elif char == "Z":
            z_mask |= 1 << k
    return x_mask, y_mask, z_mask


def pauli_to_dense(p: PauliHamiltonian, max_qubits: int = MAX_DENSE_QUBITS) -> np.ndarray:
    """Dense 2^n matrix of a Pauli Hamiltonian, constant offset included"""
    n = p.n_qubits
    if n > max_qubits:
        raise SizeLimitError(f"Dense Pauli matrix limited to {max_qubits} qubits, got {n}")
    dim = 1 << n
    cols = np.arange(dim)
    rows_all, cols_all, vals_all = [cols], [cols], [np.full(dim, p.constant_offset, dtype=complex)]

    for label, coeff in p.terms:
        x_mask, y_mask, z_mask = _pauli_masks(label)
        flip = x_mask | y_mask
        n_y = bin(y_mask).count("1")
        # <x ^ flip| P |x> = i^nY * (-1)^{popcount(x & (Y|Z))}
        parity = np.zeros(dim, dtype=np.int64)
        masked = cols & (y_mask | z_mask)
        while np.any(masked):
            parity ^= masked & 1
            masked >>= 1
        signs = 1 - 2 * parity
        rows_all.append(cols ^ flip)
        cols_all.append(cols)
        vals_all.append(coeff * (1j ** n_y) * signs)

    matrix = scipy.sparse.coo_matrix(
        (np.concatenate(vals_all), (np.concatenate(rows_all), np.concatenate(cols_all))),
        shape=(dim, dim),
    )
    return matrix.toarray()


def fermion_to_dense(h: FermionHamiltonian, max_qubits: int = MAX_DENSE_QUBITS) -> np.ndarray:
    """Dense matrix of H built from Jordan-Wigner ladder operators directly"""
    from .simcheck import annihilation_operator

    n = h.n_modes
    if n > max_qubits:
        raise SizeLimitError(f"Dense fermionic matrix limited to {max_qubits} qubits, got {n}")
    ladders = [annihilation_operator(p, n) for p in range(n)]
    numbers = [a.conj().T @ a for a in ladders]
    dim = 1 << n
    H = scipy.sparse.csr_matrix((dim, dim), dtype=complex)
    for p in range(n):
        H = H + float(h.U[p]) * numbers[p]
        for q in range(n):
            if h.T[p, q] != 0.0:
                H = H + float(h.T[p, q]) * (ladders[p].conj().T @ ladders[q])
            if p != q and h.V[p, q] != 0.0:
                H = H + float(h.V[p, q]) * (numbers[p] @ numbers[q])
    return H.toarray()


def _snake_positions(rows: int, cols: int, spinless: bool = False) -> List[Tuple[int, str]]:
    """Chain layout: rows traversed boustrophedon, spin order alternating per site step"""
    order: List[Tuple[int, str]] = []
    step = 0
    for r in range(rows):
        columns = range(cols) if r % 2 == 0 else range(cols - 1, -1, -1)
        for c in columns:
            site = r * cols + c
            if spinless:
                spins = ("none",)
            else:
                spins = ("up", "down") if step % 2 == 0 else ("down", "up")
            order.extend((site, spin) for spin in spins)
            step += 1
    return order


def hubbard_2d(rows: int, cols: int, t_hop: float, u_int: float, spinless: bool = False) -> HubbardInstance:
    """Open-boundary 2D Hubbard lattice in snake ordering.

    With spinless=True every site holds one orbital and u_int couples the
    densities of nearest neighbours.
    """
    if rows < 1 or cols < 1:
        raise InputValidationError(f"Lattice must be non-empty, got {rows}x{cols}")

    order = _snake_positions(rows, cols, spinless)
    spins = ("none",) if spinless else ("up", "down")
    position = {orbital: k for k, orbital in enumerate(order)}

    onsite = [] if spinless else [tuple(sorted((position[(s, "up")], position[(s, "down")])))
                                  for s in range(rows * cols)]

    edges = []
    for r in range(rows):
        for c in range(cols):
            site = r * cols + c
            neighbours = []
            if c + 1 < cols:
                neighbours.append(site + 1)
            if r + 1 < rows:
                neighbours.append(site + cols)
            for other in neighbours:
                for spin in spins:
                    edges.append(tuple(sorted((position[(site, spin)], position[(other, spin)]))))

    try:
        instance = HubbardInstance(
            rows=rows, cols=cols, t_hop=t_hop, u_int=u_int,
            snake_order=tuple(order), hop_edges=tuple(edges), onsite_pairs=tuple(onsite),
            spinless=spinless,
        )
    except ValidationError as e:
        raise InputValidationError(f"Invalid Hubbard instance: {e}") from e

    logger.debug(f"Hubbard {rows}x{cols}: {instance.n_modes} modes, {len(edges)} hop edges")
    return instance


def load_hubbard(path: Path) -> HubbardInstance:
    data = load_json(path, HUBBARD_SCHEMA)
    return hubbard_2d(data["rows"], data["cols"], float(data["t"]), float(data["U"]),
                      spinless=data.get("spinless", False))


def hubbard_to_hamiltonian(inst: HubbardInstance) -> FermionHamiltonian:
    """Coefficient tables in chain-position indexing"""
    n = inst.n_modes
    T = np.zeros((n, n))
    V = np.zeros((n, n))
    for p, q in inst.hop_edges:
        T[p, q] = T[q, p] = -inst.t_hop
    interacting = inst.hop_edges if inst.spinless else inst.onsite_pairs
    for p, q in interacting:
        V[p, q] = V[q, p] = inst.u_int / 2
    return build_hamiltonian(T, np.zeros(n), V)

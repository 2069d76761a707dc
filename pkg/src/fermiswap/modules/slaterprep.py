import math
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import scipy.linalg
from pydantic import ValidationError

from ..core.config_loader import DEFAULT_CONFIG
from ..core.errors import InputValidationError, SynthesisError
from ..models.circuit import Circuit, Gate, build_circuit
from ..models.givens import GivensPlan, GivensRotation, SlaterDeterminant
from ..models.schemas import UNITARY_SCHEMA
from ..utils.file_utils import load_json
from ..utils.logger import logger
from ..utils.matrix_utils import check_unitary

ZERO_PIVOT = DEFAULT_CONFIG.tolerances.zero_pivot
UNITARITY_TOL = DEFAULT_CONFIG.tolerances.unitarity
ORTHONORMALITY_TOL = DEFAULT_CONFIG.tolerances.orthonormality

Angles = Tuple[float, float]


def apply_phased_givens(A: np.ndarray, p: int, theta: float, phase: float) -> np.ndarray:
    """Rotate rows (p, p+1) of A by [[c, -e^{i phase} s], [e^{-i phase} s, c]]"""
    A = np.array(A, dtype=complex)
    if p < 0 or p + 1 >= A.shape[0]:
        raise InputValidationError(f"Rotation rows ({p}, {p + 1}) out of range for {A.shape[0]} rows")
    c, s = math.cos(theta), math.sin(theta)
    upper, lower = A[p].copy(), A[p + 1].copy()
    A[p] = c * upper - np.exp(1j * phase) * s * lower
    A[p + 1] = np.exp(-1j * phase) * s * upper + c * lower
    return A


def _normalize(phase: float, s: float, c: float) -> Angles:
    # keep phase in (-pi/2, pi/2] so real inputs give real rotations
    if phase > math.pi / 2:
        phase, s = phase - math.pi, -s
    elif phase <= -math.pi / 2:
        phase, s = phase + math.pi, -s
    return math.atan2(s, c), (0.0 if phase == 0 else phase)


def zeroing_angles(a: complex, b: complex, tol: float = ZERO_PIVOT) -> Optional[Angles]:
    """Angles whose rotation of (a, b) zeroes the lower entry b, or None if b is already zero"""
    if abs(b) < tol:
        return None
    if abs(a) < tol:
        return math.pi / 2, 0.0
    r = math.hypot(abs(a), abs(b))
    w = -b * np.conj(a) / abs(a)
    return _normalize(-float(np.angle(w)), abs(w) / r, abs(a) / r)


def zeroing_angles_upper(a: complex, b: complex, tol: float = ZERO_PIVOT) -> Optional[Angles]:
    """Angles whose rotation of (a, b) zeroes the upper entry a"""
    if abs(a) < tol:
        return None
    if abs(b) < tol:
        return math.pi / 2, 0.0
    r = math.hypot(abs(a), abs(b))
    w = a * np.conj(b) / abs(b)
    return _normalize(float(np.angle(w)), abs(w) / r, abs(b) / r)


def givens_decompose(u: np.ndarray, tol: float = UNITARITY_TOL, zero_pivot: float = ZERO_PIVOT) -> GivensPlan:
    """Reduce a unitary to a diagonal with parallel nearest-neighbour rotations.

    Entry (q, j) below the diagonal is zeroed with rows (q-1, q) in layer
    2j + n - q (counting from 1), so column j starts two layers after column j-1.
    """
    A = check_unitary(u, tol).copy()
    n = A.shape[0]
    layers: List[Tuple[GivensRotation, ...]] = []

    for label in range(1, 2 * n - 2):
        layer = []
        for j in range(n - 1):
            q = 2 * j + n - label
            if not j < q < n:
                continue
            angles = zeroing_angles(A[q - 1, j], A[q, j], zero_pivot)
            if angles is None:
                continue
            theta, phase = angles
            A = apply_phased_givens(A, q - 1, theta, phase)
            A[q, j] = 0.0
            layer.append(GivensRotation(p=q - 1, theta=theta, phase=phase, column=j))
        if layer:
            layers.append(tuple(layer))

    phases = tuple(float(x) for x in np.angle(np.diag(A)))
    plan = GivensPlan(n=n, layers=tuple(layers), diag_phases=phases)
    logger.debug(f"Givens decomposition of {n}x{n} unitary: {plan.rotation_count} rotations "
                 f"in {plan.depth} layers")
    return plan


def replay_plan(plan: GivensPlan, u: np.ndarray) -> np.ndarray:
    """Apply every rotation of a plan to u, layer by layer"""
    A = np.array(u, dtype=complex)
    for layer in plan.layers:
        for r in layer:
            A = apply_phased_givens(A, r.p, r.theta, r.phase)
    return A


def plan_to_circuit(plan: GivensPlan, invert: bool = True) -> Circuit:
    """Circuit of a plan.

    invert=True implements U(u) for the decomposed u: the diagonal phases
    first, then the rotations reversed with negated angles.
    invert=False implements U(u)^dagger.
    """
    n = plan.n
    if invert:
        layers = [[Gate.phase(p, phi) for p, phi in enumerate(plan.diag_phases)]]
        for layer in reversed(plan.layers):
            layers.append([Gate.givens(r.p, -r.theta, r.phase) for r in layer])
    else:
        layers = [[Gate.givens(r.p, r.theta, r.phase) for r in layer] for layer in plan.layers]
        layers.append([Gate.phase(p, -phi) for p, phi in enumerate(plan.diag_phases)])

    metadata = {
        "scope": "rotation",
        "invert": invert,
        "n_modes": n,
        "rotations": plan.rotation_count,
        "rotation_layers": plan.depth,
    }
    return build_circuit(n, layers, metadata)


# Slater determinants

def slater_determinant(Q: np.ndarray, tol: float = ORTHONORMALITY_TOL) -> SlaterDeterminant:
    try:
        return SlaterDeterminant(Q=Q, tolerance=tol)
    except ValidationError as e:
        raise InputValidationError(f"Invalid Slater determinant: {e}") from e


def random_unitary(n: int, seed: int) -> np.ndarray:
    """Haar-random unitary from the QR of a complex Gaussian matrix"""
    rng = np.random.default_rng(seed)
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_slater(n: int, eta: int, seed: int) -> SlaterDeterminant:
    return slater_determinant(random_unitary(n, seed)[:eta])


def orthonormal_complement(Q: np.ndarray) -> np.ndarray:
    """Rows spanning the hole orbitals: P Q^dagger = 0, P P^dagger = I"""
    Q = np.asarray(Q, dtype=complex)
    return scipy.linalg.null_space(Q.conj()).T


def load_unitary_input(path: Path, unitarity_tol: float = UNITARITY_TOL,
                       orthonormality_tol: float = ORTHONORMALITY_TOL) -> Union[SlaterDeterminant, np.ndarray]:
    """Slater determinant when eta is given, otherwise a full n x n unitary"""
    data = load_json(path, UNITARY_SCHEMA)
    n = data["n"]
    if len(data["re"]) != len(data["im"]):
        raise InputValidationError(f"{path}: re and im lengths differ")
    values = np.array(data["re"], dtype=float) + 1j * np.array(data["im"], dtype=float)

    eta = data.get("eta")
    if eta is None:
        if values.size != n * n:
            raise InputValidationError(f"{path}: expected {n * n} entries for an {n}x{n} unitary")
        return check_unitary(values.reshape(n, n), unitarity_tol)

    if values.size == eta * n:
        return slater_determinant(values.reshape(eta, n), orthonormality_tol)
    if values.size == n * n:
        return slater_determinant(values.reshape(n, n)[:eta], orthonormality_tol)
    raise InputValidationError(f"{path}: expected {eta * n} or {n * n} entries, got {values.size}")


def _column_rotation(M: np.ndarray, p: int, theta: float, phase: float) -> np.ndarray:
    """Rotate columns (p, p+1) of M"""
    return apply_phased_givens(M.T, p, theta, phase).T


def _particle_eliminations(Q: np.ndarray, tol: float) -> List[Tuple[int, float, float]]:
    """Column rotations taking Q (eta <= n - eta) to [D | 0], in elimination order"""
    M = np.array(Q, dtype=complex)
    eta, n = M.shape

    # Row rotations only mix occupied orbitals; they clear the top-right staircase
    for j in reversed(range(n - eta + 1, n)):
        for i in range(eta - n + j):
            angles = zeroing_angles_upper(M[i, j], M[i + 1, j], tol)
            if angles is not None:
                M = apply_phased_givens(M, i, *angles)
                M[i, j] = 0.0

    eliminations = []
    for i in range(eta):
        for j in range(n - eta + i, i, -1):
            angles = zeroing_angles(M[i, j - 1], M[i, j], tol)
            if angles is None:
                continue
            M = _column_rotation(M, j - 1, *angles)
            M[i, j] = 0.0
            eliminations.append((j - 1, *angles))
    return eliminations


def _schedule_asap(n: int, gates: List[Gate]) -> List[List[Gate]]:
    """Place each gate in the earliest layer after every gate sharing a qubit"""
    ready = [0] * n
    layers: List[List[Gate]] = []
    for gate in gates:
        index = max(ready[q] for q in gate.qubits)
        if index == len(layers):
            layers.append([])
        layers[index].append(gate)
        for q in gate.qubits:
            ready[q] = index + 1
    return layers


def slater_prep_circuit(d: SlaterDeterminant, tol: float = ZERO_PIVOT) -> Circuit:
    """Circuit taking the state with modes 0..eta-1 occupied to the determinant d"""
    eta, n = d.eta, d.n
    Q = np.array(d.Q)

    holes = eta > n - eta
    if n - eta == 0:
        eliminations = []
    elif not holes:
        eliminations = _particle_eliminations(Q, tol)
    else:
        # rotate the hole orbitals onto the last n - eta modes instead
        flipped = _particle_eliminations(orthonormal_complement(Q)[:, ::-1], tol)
        eliminations = [(n - 2 - p, -theta, -phase) for p, theta, phase in flipped]

    reduced = Q
    for p, theta, phase in eliminations:
        reduced = _column_rotation(reduced, p, theta, phase)
    residual = float(np.max(np.abs(reduced[:, eta:]))) if eta < n else 0.0
    if residual > 1e-8:
        raise SynthesisError(f"Slater reduction left weight {residual:.3e} on virtual modes")
    global_phase = float(np.angle(np.linalg.det(reduced[:, :eta])))

    gates = []
    if abs(global_phase) > tol:
        gates.append(Gate.phase(0, global_phase))
    gates.extend(Gate.givens(p, -theta, phase) for p, theta, phase in reversed(eliminations))
    layers = _schedule_asap(n, gates)

    rotation_depth = sum(1 for layer in layers if any(g.kind == "givens" for g in layer))
    claim = max(eta - 1, 0)
    metadata = {
        "scope": "slater",
        "n_modes": n,
        "eta": eta,
        "holes": holes,
        "rotations": len(eliminations),
        "rotation_bound": eta * (n - eta),
        "rotation_depth": rotation_depth,
        "depth_claim": claim,
        "within_depth_claim": rotation_depth <= claim,
        "slater": d.to_dict(),
    }
    if rotation_depth > claim:
        logger.warning(f"Slater prep (n={n}, eta={eta}): rotation depth {rotation_depth} "
                       f"exceeds eta-1 = {claim}")
    circuit = build_circuit(n, layers, metadata)
    logger.info(f"Slater prep (n={n}, eta={eta}): {len(eliminations)} Givens gates, depth {circuit.depth}")
    return circuit


def _shift(gate: Gate, offset: int) -> Gate:
    return Gate(kind=gate.kind, qubits=tuple(q + offset for q in gate.qubits), params=gate.params)


def spin_split_prep(d_up: SlaterDeterminant, d_down: SlaterDeterminant,
                    n_modes: Optional[int] = None) -> Circuit:
    """Prepare the two spin sectors side by side: up on the first n_up qubits, down after.

    Each sector starts from its own occupied-first reference state.
    """
    n_up, n_down = d_up.n, d_down.n
    if n_modes is not None and n_modes != n_up + n_down:
        raise InputValidationError(f"Sectors hold {n_up} + {n_down} modes, chain has {n_modes}")

    up = slater_prep_circuit(d_up)
    down = slater_prep_circuit(d_down)
    layers: List[List[Gate]] = []
    for k in range(max(up.depth, down.depth)):
        layer = list(up.layers[k]) if k < up.depth else []
        if k < down.depth:
            layer.extend(_shift(g, n_up) for g in down.layers[k])
        layers.append(layer)

    metadata = {
        "scope": "spin_split",
        "n_modes": n_up + n_down,
        "n_up": n_up,
        "eta_up": d_up.eta,
        "eta_down": d_down.eta,
        "rotations": up.metadata["rotations"] + down.metadata["rotations"],
        "up": d_up.to_dict(),
        "down": d_down.to_dict(),
    }
    return build_circuit(n_up + n_down, layers, metadata)


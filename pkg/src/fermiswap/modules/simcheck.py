import math
import time
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
from typing import Any, Dict, List, Optional

import numpy as np
import scipy.linalg
import scipy.sparse
from pydantic import BaseModel, ConfigDict, Field

from ..core.config_loader import DEFAULT_CONFIG
from ..core.errors import BranchCutError, FermiSwapError, InputValidationError, SizeLimitError
from ..models.circuit import Circuit, Gate
from ..models.givens import SlaterDeterminant
from ..models.hamiltonian import FermionHamiltonian
from ..models.schedule import ScheduleStage, SwapSchedule
from ..utils.logger import logger
from ..utils.matrix_utils import check_unitary
from .hamiltonian import jordan_wigner, pauli_to_dense
from .swapnet import (
    evolution_substeps,
    gate_matrix,
    network_circuit,
    swap_network_schedule,
    synthesize_trotter_evolution,
    synthesize_trotter_step,
)

LIMITS = DEFAULT_CONFIG.limits
TOLERANCES = DEFAULT_CONFIG.tolerances

# Below this many amplitude groups a gate is applied on the calling thread
_MIN_CHUNK = 1 << 10


class VerificationReport(BaseModel):
    """Outcome of one oracle check"""
    model_config = ConfigDict(populate_by_name=True)

    check: str
    n: int
    metric: float
    tolerance: float
    passed: bool = Field(alias="pass")
    seconds: float

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(by_alias=True)


# Operators

def _check_size(n: int, limit: int, what: str) -> None:
    if n > limit:
        raise SizeLimitError(f"{what} limited to {limit} qubits, got {n}")


def annihilation_operator(p: int, n: int) -> scipy.sparse.csr_matrix:
    """a_p = Z_0 ... Z_{p-1} sigma_p with sigma = |0><1|"""
    dim = 1 << n
    states = np.arange(dim)
    occupied = states[(states >> p) & 1 == 1]
    below = occupied & ((1 << p) - 1)
    parity = np.array([bin(int(x)).count("1") & 1 for x in below], dtype=np.int64)
    signs = 1.0 - 2.0 * parity
    return scipy.sparse.csr_matrix(
        (signs.astype(complex), (occupied ^ (1 << p), occupied)), shape=(dim, dim)
    )


def _occupations(n: int) -> np.ndarray:
    states = np.arange(1 << n)
    return np.stack([(states >> p) & 1 for p in range(n)]).astype(float)


def number_operator(n: int) -> np.ndarray:
    """Total particle number as a dense diagonal matrix"""
    _check_size(n, LIMITS.max_dense_qubits, "Number operator")
    return np.diag(_occupations(n).sum(axis=0)).astype(complex)


def hartree_fock_state(n: int, eta: int) -> np.ndarray:
    """Modes 0..eta-1 occupied"""
    psi = np.zeros(1 << n, dtype=complex)
    psi[(1 << eta) - 1] = 1.0
    return psi


def random_state(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return psi / np.linalg.norm(psi)


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|"""
    return float(abs(np.vdot(a, b)))


def commutes_with_number(op: np.ndarray, tol: float = 1e-10) -> bool:
    n = int(round(math.log2(op.shape[0])))
    N = number_operator(n)
    return float(np.linalg.norm(N @ op - op @ N)) <= tol


def operator_distance(A: np.ndarray, B: np.ndarray, phase_aligned: bool = True) -> float:
    """Frobenius distance, optionally minimized over a global phase on B"""
    if A.shape != B.shape:
        raise InputValidationError(f"Operator shapes differ: {A.shape} vs {B.shape}")
    if not phase_aligned:
        return float(np.linalg.norm(A - B))
    overlap = np.vdot(B, A)
    gamma = np.angle(overlap) if overlap != 0 else 0.0
    return float(np.linalg.norm(A - np.exp(1j * gamma) * B))


# Circuit simulation

def _gate_groups(gate: Gate, n: int) -> List[np.ndarray]:
    """Amplitude index groups a gate mixes, in local basis order"""
    states = np.arange(1 << n)
    if len(gate.qubits) == 1:
        bit = 1 << gate.qubits[0]
        base = states[(states & bit) == 0]
        return [base, base | bit]
    hi, lo = 1 << gate.qubits[0], 1 << gate.qubits[1]
    base = states[(states & (hi | lo)) == 0]
    return [base, base | lo, base | hi, base | hi | lo]


def _mix(array: np.ndarray, matrix: np.ndarray, groups: List[np.ndarray]) -> None:
    values = [array[g] for g in groups]
    size = len(groups)
    for k in range(size):
        out = matrix[k, 0] * values[0]
        for j in range(1, size):
            out = out + matrix[k, j] * values[j]
        array[groups[k]] = out


def _apply_gate(array: np.ndarray, gate: Gate, n: int, pool: Optional[ThreadPoolExecutor] = None,
                threads: int = 1) -> None:
    matrix = gate_matrix(gate)
    groups = _gate_groups(gate, n)
    count = len(groups[0])
    if pool is None or threads == 1 or count < 2 * _MIN_CHUNK:
        _mix(array, matrix, groups)
        return
    bounds = np.linspace(0, count, threads + 1).astype(int)
    chunks = [[g[bounds[i]:bounds[i + 1]] for g in groups] for i in range(threads)]
    list(pool.map(lambda chunk: _mix(array, matrix, chunk), chunks))


def apply_circuit(psi: np.ndarray, c: Circuit, threads: int = 1) -> np.ndarray:
    """Apply a circuit to a statevector, layer by layer.

    With threads > 1 each gate's amplitude groups are split into disjoint
    chunks; every amplitude sees the same arithmetic regardless of threads.
    """
    psi = np.array(psi, dtype=complex)
    if psi.shape != (1 << c.n_qubits,):
        raise InputValidationError(f"State of shape {psi.shape} does not match {c.n_qubits} qubits")
    if threads < 1:
        raise InputValidationError(f"Thread count must be at least 1, got {threads}")

    if threads == 1:
        for gate in c.gates():
            _apply_gate(psi, gate, c.n_qubits)
        return psi

    with ThreadPoolExecutor(max_workers=threads) as pool:
        for gate in c.gates():
            _apply_gate(psi, gate, c.n_qubits, pool, threads)
    return psi


def circuit_to_dense(c: Circuit, max_qubits: int = LIMITS.max_dense_qubits) -> np.ndarray:
    """Ordered product of the embedded gate matrices"""
    _check_size(c.n_qubits, max_qubits, "Dense circuit unitary")
    U = np.eye(1 << c.n_qubits, dtype=complex)
    for gate in c.gates():
        _apply_gate(U, gate, c.n_qubits)
    return U


def network_permutation(schedule: SwapSchedule) -> np.ndarray:
    """Dense signed permutation carried out by a schedule's fermionic swaps"""
    return circuit_to_dense(network_circuit(schedule))


# Exact oracles

def _exp_hermitian(H: np.ndarray, t: float) -> np.ndarray:
    """exp(-iHt) for Hermitian H"""
    if np.linalg.norm(H - H.conj().T) > 1e-10 * max(1.0, np.linalg.norm(H)):
        raise FermiSwapError("Generator is not Hermitian")
    eigvals, eigvecs = scipy.linalg.eigh(H)
    return (eigvecs * np.exp(-1j * eigvals * t)) @ eigvecs.conj().T


def exact_evolution(h: FermionHamiltonian, t: float,
                    max_qubits: int = LIMITS.max_dense_qubits) -> np.ndarray:
    """exp(-iHt) of the full Hamiltonian, constant included"""
    _check_size(h.n_modes, max_qubits, "Exact evolution")
    H = pauli_to_dense(jordan_wigner(h), max_qubits)
    return _exp_hermitian(H, t)


class _TermExponentials:
    """Exact exponentials of single Hamiltonian terms in the orbital frame"""

    def __init__(self, h: FermionHamiltonian):
        self.h = h
        n = h.n_modes
        self.ladders = [annihilation_operator(p, n) for p in range(n)]
        self.occupations = _occupations(n)

    def potential(self, U: np.ndarray, t: float) -> np.ndarray:
        energies = np.array([self.h.onsite_energy(p) for p in range(self.h.n_modes)])
        phases = np.exp(-1j * t * (energies @ self.occupations))
        return phases[:, np.newaxis] * U

    def pair(self, U: np.ndarray, a: int, b: int, t: float) -> np.ndarray:
        """exp(-i(V_ab+V_ba) t n_a n_b) exp(-i T_ab t (a+_a a_b + h.c.)) applied to U"""
        theta = float(self.h.T[a, b]) * t
        phi = self.h.pair_interaction(a, b) * t
        if theta != 0.0:
            hop = self.ladders[a].conj().T @ self.ladders[b]
            hop = hop + hop.conj().T
            na, nb = self.occupations[a], self.occupations[b]
            single = (na + nb - 2 * na * nb)[:, np.newaxis]
            U = U + (math.cos(theta) - 1) * single * U - 1j * math.sin(theta) * (hop @ U)
        if phi != 0.0:
            both = self.occupations[a] * self.occupations[b]
            U = (1 + (np.exp(-1j * phi) - 1) * both)[:, np.newaxis] * U
        return U


def _orbital_frame_step(terms: _TermExponentials, sched: SwapSchedule, t: float, order: int,
                        U: np.ndarray) -> np.ndarray:
    """Left-multiply U by one step's term exponentials in servicing order"""

    def service(U: np.ndarray, stage: ScheduleStage, dt: float) -> np.ndarray:
        for g in stage.services:
            U = terms.pair(U, *g.orbitals, dt)
        return U

    U = terms.potential(U, t)
    stages = list(sched.stages)
    if order == 1:
        for stage in stages:
            U = service(U, stage, t)
        return U

    for stage in stages[:-1]:
        U = service(U, stage, t)
    U = service(U, stages[-1], 2 * t)
    for stage in reversed(stages[:-1]):
        U = service(U, stage, t)
    return terms.potential(U, t)


def trotter_reference(h: FermionHamiltonian, sched: SwapSchedule, t: float, order: int = 1,
                      max_qubits: int = LIMITS.max_trotter_reference_qubits) -> np.ndarray:
    """Product of exact term exponentials in the schedule's servicing order.

    Order 1 ends with the schedule's swap permutation so the result is directly
    comparable with the synthesized circuit. Order 2 mirrors the schedule around
    a doubled final stage and needs no permutation.
    """
    if order not in (1, 2):
        raise InputValidationError(f"Unsupported Trotter order {order}")
    _check_size(h.n_modes, max_qubits, "Trotter reference")
    if sched.n != h.n_modes:
        raise InputValidationError(f"Schedule has {sched.n} modes, Hamiltonian {h.n_modes}")

    U = _orbital_frame_step(_TermExponentials(h), sched, t, order, np.eye(1 << h.n_modes, dtype=complex))
    if order == 1:
        return network_permutation(sched) @ U
    return U


def evolution_reference(h: FermionHamiltonian, t: float, steps: int, order: int = 1,
                        max_qubits: int = LIMITS.max_trotter_reference_qubits) -> np.ndarray:
    """Term-exact reference for synthesize_trotter_evolution.

    Steps multiply in the orbital frame; the swap permutations of the
    first-order steps are applied once at the end.
    """
    if order not in (1, 2, 4):
        raise InputValidationError(f"Unsupported Trotter order {order}")
    _check_size(h.n_modes, max_qubits, "Evolution reference")

    terms = _TermExponentials(h)
    dim = 1 << h.n_modes
    U = np.eye(dim, dtype=complex)
    W = np.eye(dim, dtype=complex)
    layout = None
    for dt, step_order in evolution_substeps(t, steps, order):
        sched = swap_network_schedule(h.n_modes, layout)
        U = _orbital_frame_step(terms, sched, dt, step_order, U)
        if step_order == 1:
            W = network_permutation(sched) @ W
            layout = sched.final_order
    return W @ U


def trotter_error(h: FermionHamiltonian, t: float, order: int = 1) -> float:
    """Distance between a synthesized step and exact evolution over the same time"""
    circuit = synthesize_trotter_step(h, t, order)
    C = circuit_to_dense(circuit)
    if order == 1:
        C = network_permutation(swap_network_schedule(h.n_modes)).conj().T @ C
        total = t
    else:
        total = 2 * t
    return operator_distance(C, exact_evolution(h, total))


def evolution_error(h: FermionHamiltonian, t: float, steps: int, order: int = 1) -> float:
    """Distance between a synthesized evolution and exact evolution over its total time"""
    C = circuit_to_dense(synthesize_trotter_evolution(h, t, steps, order))
    if order == 1:
        if steps % 2 == 1:
            C = network_permutation(swap_network_schedule(h.n_modes)).conj().T @ C
        total = steps * t
    else:
        total = 2 * steps * t
    return operator_distance(C, exact_evolution(h, total))


def _one_body_generator(K: np.ndarray) -> np.ndarray:
    n = K.shape[0]
    ladders = [annihilation_operator(p, n) for p in range(n)]
    dim = 1 << n
    G = scipy.sparse.csr_matrix((dim, dim), dtype=complex)
    for p in range(n):
        for q in range(n):
            if K[p, q] != 0:
                G = G + complex(K[p, q]) * (ladders[p].conj().T @ ladders[q])
    return G.toarray()


def thouless_unitary(u: np.ndarray, branch_tol: float = TOLERANCES.branch_cut,
                     unitarity_tol: float = TOLERANCES.unitarity,
                     max_modes: int = LIMITS.max_thouless_modes) -> np.ndarray:
    """U(u) = exp(sum_pq [log u]_pq a+_p a_q), so U a+_j U^dag = sum_k u_kj a+_k"""
    u = check_unitary(u, unitarity_tol)
    n = u.shape[0]
    _check_size(n, max_modes, "Thouless unitary")

    T, Z = scipy.linalg.schur(u, output='complex')
    eigvals = np.diag(T)
    if np.any(np.abs(eigvals + 1) < branch_tol):
        raise BranchCutError("Matrix logarithm is ambiguous: eigenvalue at -1")
    K = (Z * np.log(eigvals)) @ Z.conj().T
    # G is anti-Hermitian; iG is Hermitian
    G = _one_body_generator(K)
    return _exp_hermitian(1j * G, 1.0)


def slater_amplitudes(d: SlaterDeterminant, max_modes: int = LIMITS.max_slater_modes) -> np.ndarray:
    """Amplitudes of c+_1 ... c+_eta |vac>: det(Q[:, S]) on sorted occupied set S"""
    _check_size(d.n, max_modes, "Slater amplitudes")
    psi = np.zeros(1 << d.n, dtype=complex)
    for S in combinations(range(d.n), d.eta):
        index = sum(1 << k for k in S)
        psi[index] = np.linalg.det(d.Q[:, list(S)])
    return psi


def timed_check(check: str, n: int, tolerance: float, fn) -> VerificationReport:
    """Run a metric function and wrap the result in a report"""
    start = time.perf_counter()
    metric = float(fn())
    seconds = time.perf_counter() - start
    report = VerificationReport(check=check, n=n, metric=metric, tolerance=tolerance,
                                passed=metric <= tolerance, seconds=seconds)
    level = logger.info if report.passed else logger.error
    level(f"{check} (n={n}): metric {metric:.3e} vs tolerance {tolerance:.1e} -> "
          f"{'PASS' if report.passed else 'FAIL'}")
    return report

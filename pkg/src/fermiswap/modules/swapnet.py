import math
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from ..core.errors import InputValidationError, SynthesisError
from ..models.circuit import Circuit, Gate, build_circuit
from ..models.hamiltonian import FermionHamiltonian, HubbardInstance
from ..models.schedule import ScheduleStage, StageGate, SwapSchedule
from ..utils.logger import logger
from .hamiltonian import hamiltonian_fingerprint, hubbard_to_hamiltonian

# Two-qubit matrices use local index 2*bit(qubits[0]) + bit(qubits[1])

FSWAP = np.array([
    [1, 0, 0, 0],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [0, 0, 0, -1],
], dtype=complex)


def _check_angles(*angles: float) -> None:
    for a in angles:
        if not math.isfinite(a):
            raise InputValidationError(f"Gate angle must be finite, got {a}")


def fswap_matrix() -> np.ndarray:
    return FSWAP.copy()


def fsim_matrix(theta: float, phi: float) -> np.ndarray:
    """Hopping by theta, interaction by phi, then a fermionic swap"""
    _check_angles(theta, phi)
    c, s = math.cos(theta), math.sin(theta)
    return np.array([
        [1, 0, 0, 0],
        [0, -1j * s, c, 0],
        [0, c, -1j * s, 0],
        [0, 0, 0, -np.exp(-1j * phi)],
    ], dtype=complex)


def givens_matrix(theta: float, phase: float) -> np.ndarray:
    """Number-conserving rotation implementing the mode rotation
    [[c, -e^{i phase} s], [e^{-i phase} s, c]] on (p, p+1)"""
    _check_angles(theta, phase)
    c, s = math.cos(theta), math.sin(theta)
    return np.array([
        [1, 0, 0, 0],
        [0, c, np.exp(-1j * phase) * s, 0],
        [0, -np.exp(1j * phase) * s, c, 0],
        [0, 0, 0, 1],
    ], dtype=complex)


def phase_matrix(angle: float) -> np.ndarray:
    _check_angles(angle)
    return np.array([[1, 0], [0, np.exp(1j * angle)]], dtype=complex)


def gate_matrix(gate: Gate) -> np.ndarray:
    """Local matrix of any gate kind"""
    if gate.kind == "fsim":
        theta, phi, swap = gate.params
        matrix = fsim_matrix(theta, phi)
        return matrix if swap else matrix @ FSWAP
    if gate.kind == "givens":
        return givens_matrix(*gate.params)
    if gate.kind == "phase":
        return phase_matrix(gate.params[0])
    return fswap_matrix()


def swap_network_schedule(n: int, initial_order: Optional[Sequence[int]] = None) -> SwapSchedule:
    """Odd-even transposition network reversing n orbitals.

    initial_order gives the orbital resident at each position before the first
    layer (identity by default); the network leaves it reversed.
    """
    if n < 2:
        raise InputValidationError(f"Swap network needs at least 2 modes, got {n}")
    if initial_order is not None and sorted(initial_order) != list(range(n)):
        raise InputValidationError(f"Initial order {list(initial_order)} is not a permutation of {n} orbitals")

    order = list(range(n)) if initial_order is None else list(initial_order)
    start = tuple(order) if initial_order is not None else ()
    stages = []
    for k in range(n):
        gates = []
        for i in range(k % 2, n - 1, 2):
            gates.append(StageGate(positions=(i, i + 1), orbitals=(order[i], order[i + 1])))
        if not gates:
            continue
        for g in gates:
            i, j = g.positions
            order[i], order[j] = order[j], order[i]
        stages.append(ScheduleStage(gates=tuple(gates)))

    return SwapSchedule(n=n, stages=tuple(stages), metadata={"kind": "odd-even"}, initial_order=start)


def _term_gate(h: FermionHamiltonian, g: StageGate, t: float, scale: float = 1.0,
               swap: Optional[bool] = None) -> Gate:
    a, b = g.orbitals
    theta = float(h.T[a, b]) * t * scale
    phi = h.pair_interaction(a, b) * t * scale
    return Gate.fsim(g.positions[0], theta, phi, swap=g.swap if swap is None else swap)


def _stage_gates(h: FermionHamiltonian, stage: ScheduleStage, t: float) -> List[Gate]:
    gates = []
    for g in stage.gates:
        if g.service:
            gates.append(_term_gate(h, g, t))
        else:
            gates.append(Gate.fswap(g.positions[0]))
    return gates


def _potential_layer(h: FermionHamiltonian, t: float, skip_zero: bool = False,
                     layout: Optional[Sequence[int]] = None) -> List[Gate]:
    """Phase gate on each position for the orbital resident there"""
    layout = range(h.n_modes) if layout is None else layout
    layer = []
    for p, orbital in enumerate(layout):
        angle = -h.onsite_energy(orbital) * t
        if skip_zero and angle == 0.0:
            continue
        layer.append(Gate.phase(p, angle))
    return layer


def _step_layers(h: FermionHamiltonian, t: float, order: int,
                 layout: Optional[Sequence[int]] = None) -> Tuple[List[List[Gate]], SwapSchedule]:
    """Gate layers of one Trotter step starting from layout, with the network it follows"""
    schedule = swap_network_schedule(h.n_modes, layout)
    stages = list(schedule.stages)

    layers: List[List[Gate]] = [_potential_layer(h, t, layout=layout)]
    if order == 1:
        layers.extend(_stage_gates(h, stage, t) for stage in stages)
        return layers, schedule

    layers.extend(_stage_gates(h, stage, t) for stage in stages[:-1])
    layers.append([_term_gate(h, g, t, scale=2.0, swap=False) for g in stages[-1].gates])
    layers.extend(_stage_gates(h, stage, t) for stage in reversed(stages[:-1]))
    layers.append(_potential_layer(h, t, layout=layout))
    return layers, schedule


def _check_step_args(t: float, order: int, supported: Tuple[int, ...]) -> None:
    if order not in supported:
        raise InputValidationError(f"Unsupported Trotter order {order}")
    if not math.isfinite(t):
        raise InputValidationError(f"Time step must be finite, got {t}")


def synthesize_trotter_step(h: FermionHamiltonian, t: float, order: int = 1) -> Circuit:
    """One Trotter step on a linear chain.

    Order 1 evolves for t and leaves the orbital order reversed. Order 2 evolves
    for 2t and returns every orbital to its starting position.
    """
    _check_step_args(t, order, (1, 2))
    n = h.n_modes
    layers, schedule = _step_layers(h, t, order)
    final_order = schedule.final_order if order == 1 else list(range(n))

    metadata = {
        "scope": "trotter",
        "order": order,
        "t": float(t),
        "n_modes": n,
        "hamiltonian_hash": hamiltonian_fingerprint(h),
        "final_order": final_order,
        "swap_layers": schedule.swap_layer_count,
        "hamiltonian": h.to_dict(),
    }
    circuit = build_circuit(n, layers, metadata)
    logger.info(f"Trotter step (order {order}): {n} modes, {circuit.two_qubit_count} two-qubit gates, "
                f"depth {circuit.depth}")
    return circuit


SUZUKI_WEIGHT = 1.0 / (4.0 - 4.0 ** (1.0 / 3.0))
SUZUKI_WEIGHTS = (SUZUKI_WEIGHT, SUZUKI_WEIGHT, 1.0 - 4.0 * SUZUKI_WEIGHT, SUZUKI_WEIGHT, SUZUKI_WEIGHT)


def evolution_substeps(t: float, steps: int, order: int) -> List[Tuple[float, int]]:
    """(time step, step order) of every elementary step in an evolution.

    Order 4 splits each step into five second-order steps with Suzuki weights.
    """
    if order == 4:
        return [(w * t, 2) for _ in range(steps) for w in SUZUKI_WEIGHTS]
    return [(t, order)] * steps


def _is_phase_layer(layer: List[Gate]) -> bool:
    return bool(layer) and all(g.kind == "phase" for g in layer)


def _extend_merging_phases(layers: List[List[Gate]], step: List[List[Gate]]) -> None:
    """Append step, fusing its leading phase layer into a trailing one"""
    if layers and step and _is_phase_layer(layers[-1]) and _is_phase_layer(step[0]):
        angles: Dict[int, float] = {g.qubits[0]: g.params[0] for g in layers[-1]}
        for g in step[0]:
            angles[g.qubits[0]] = angles.get(g.qubits[0], 0.0) + g.params[0]
        layers[-1] = [Gate.phase(q, angle) for q, angle in sorted(angles.items())]
        step = step[1:]
    layers.extend(step)


def synthesize_trotter_evolution(h: FermionHamiltonian, t: float, steps: int, order: int = 1) -> Circuit:
    """Consecutive Trotter steps on a linear chain.

    First-order steps alternate between the forward and reversed orbital layouts,
    each starting where the previous one stopped, and evolve for steps * t.
    Second- and fourth-order steps evolve for 2t each and return to the starting
    layout, so neighbouring steps share one potential layer.
    """
    _check_step_args(t, order, (1, 2, 4))
    if steps < 1:
        raise InputValidationError(f"Evolution needs at least one step, got {steps}")
    n = h.n_modes

    layers: List[List[Gate]] = []
    layout: Optional[List[int]] = None
    swap_layers = 0
    for dt, step_order in evolution_substeps(t, steps, order):
        step, schedule = _step_layers(h, dt, step_order, layout)
        if step_order == 1:
            layers.extend(step)
            layout = schedule.final_order
            swap_layers += schedule.swap_layer_count
        else:
            _extend_merging_phases(layers, step)
            swap_layers += 2 * (schedule.swap_layer_count - 1)

    metadata = {
        "scope": "evolution",
        "order": order,
        "t": float(t),
        "steps": steps,
        "n_modes": n,
        "hamiltonian_hash": hamiltonian_fingerprint(h),
        "final_order": list(range(n)) if layout is None else layout,
        "swap_layers": swap_layers,
        "hamiltonian": h.to_dict(),
    }
    circuit = build_circuit(n, layers, metadata)
    logger.info(f"Trotter evolution (order {order}, {steps} steps): {circuit.two_qubit_count} two-qubit gates, "
                f"depth {circuit.depth}")
    return circuit


def network_circuit(schedule: SwapSchedule) -> Circuit:
    """Bare fermionic swaps of a schedule"""
    layers = [[Gate.fswap(i) for i, _ in stage.swaps] for stage in schedule.stages]
    return build_circuit(schedule.n, layers, {"scope": "network"})


def circuit_stats(c: Circuit) -> Dict[str, object]:
    """Gate counts and depth"""
    per_kind = {"fsim": 0, "givens": 0, "phase": 0, "fswap": 0}
    for gate in c.gates():
        per_kind[gate.kind] += 1
    return {
        "two_qubit_count": c.two_qubit_count,
        "depth": c.depth,
        "per_kind_counts": per_kind,
    }


# Hubbard scheduling

def hubbard_terms(inst: HubbardInstance) -> Set[Tuple[int, int]]:
    """Interacting orbital pairs (orbital label = initial chain position)"""
    return set(inst.hop_edges) | set(inst.onsite_pairs)


def _apply_parity_layer(order: List[int], parity: int) -> None:
    for i in range(parity, len(order) - 1, 2):
        order[i], order[i + 1] = order[i + 1], order[i]


def _adjacent_terms(order: List[int], terms: Set[Tuple[int, int]]) -> Dict[Tuple[int, int], int]:
    """Terms adjacent in this configuration, mapped to their left position"""
    found = {}
    for i in range(len(order) - 1):
        pair = tuple(sorted((order[i], order[i + 1])))
        if pair in terms:
            found[pair] = i
    return found


def _first_meetings(n: int, terms: Set[Tuple[int, int]], first_parity: int) -> Dict[Tuple[int, int], int]:
    """Number of alternating layers after which each term is first adjacent"""
    order = list(range(n))
    meet: Dict[Tuple[int, int], int] = {}
    for k in range(n + 1):
        for pair in _adjacent_terms(order, terms):
            meet.setdefault(pair, k)
        if len(meet) == len(terms):
            break
        _apply_parity_layer(order, (first_parity + k) % 2)
    return meet


def _plan_circulation(n: int, terms: Set[Tuple[int, int]]) -> List[int]:
    """Parity sequence: a layers one way, a layers back, b layers the other way.

    (direction, a) minimizes the total layer count; the single-direction
    sweep of n layers always covers every pair.
    """
    meetings = {parity: _first_meetings(n, terms, parity) for parity in (0, 1)}
    best: Optional[Tuple[int, int, int, int]] = None

    for first in (0, 1):
        other = 1 - first
        for a in range(n + 1):
            remaining = [pair for pair in terms if meetings[first].get(pair, n + 1) > a]
            if any(pair not in meetings[other] for pair in remaining):
                continue
            b = max((meetings[other][pair] for pair in remaining), default=0)
            total = a if b == 0 else 2 * a + b
            candidate = (total, first, a, b)
            if best is None or candidate < best:
                best = candidate

    total, first, a, b = best
    forward = [(first + k) % 2 for k in range(a)]
    if b == 0:
        return forward
    backward = list(reversed(forward))
    return forward + backward + [(1 - first + k) % 2 for k in range(b)]


def hubbard_swap_schedule(inst: HubbardInstance) -> SwapSchedule:
    """Circulating swap schedule making every Hubbard term adjacent once"""
    n = inst.n_modes
    terms = hubbard_terms(inst)
    parities = _plan_circulation(n, terms)

    order = list(range(n))
    pending = set(terms)
    stages: List[ScheduleStage] = []

    for k in range(len(parities) + 1):
        adjacent = {pair: i for pair, i in _adjacent_terms(order, pending).items()}
        parity = parities[k] if k < len(parities) else None

        separate = [(i, pair) for pair, i in adjacent.items() if parity is None or i % 2 != parity]
        for split in (0, 1):
            gates = [StageGate(positions=(i, i + 1), orbitals=(order[i], order[i + 1]), swap=False)
                     for i, _ in sorted(separate) if i % 2 == split]
            if gates:
                stages.append(ScheduleStage(gates=tuple(gates)))
        pending -= {pair for _, pair in separate}

        if parity is None:
            break
        gates = []
        for i in range(parity, n - 1, 2):
            pair = tuple(sorted((order[i], order[i + 1])))
            service = pair in pending
            pending.discard(pair)
            gates.append(StageGate(positions=(i, i + 1), orbitals=(order[i], order[i + 1]),
                                   swap=True, service=service))
        stages.append(ScheduleStage(gates=tuple(gates)))
        _apply_parity_layer(order, parity)

    if pending:
        raise SynthesisError(f"Hubbard schedule left {len(pending)} terms unserviced")

    swap_layers = len(parities)
    # the closed-form count covers spinful lattices; spinless ones only get the full sweep
    bound = n if inst.spinless else math.ceil(math.sqrt(9 * n / 2))
    within = swap_layers <= bound
    if not within:
        logger.warning(f"Hubbard {inst.rows}x{inst.cols}: {swap_layers} swap layers exceeds "
                       f"closed-form count {bound}")
    return SwapSchedule(n=n, stages=tuple(stages), metadata={
        "kind": "hubbard",
        "swap_layers": swap_layers,
        "layer_bound": bound,
        "within_bound": within,
    })


def synthesize_hubbard_trotter(inst: HubbardInstance, t: float) -> Circuit:
    """First-order Hubbard Trotter step following hubbard_swap_schedule"""
    if not math.isfinite(t):
        raise InputValidationError(f"Time step must be finite, got {t}")
    h = hubbard_to_hamiltonian(inst)
    schedule = hubbard_swap_schedule(inst)

    layers: List[List[Gate]] = [_potential_layer(h, t, skip_zero=True)]
    layers.extend(_stage_gates(h, stage, t) for stage in schedule.stages)

    metadata = {
        "scope": "hubbard",
        "order": 1,
        "t": float(t),
        "n_modes": inst.n_modes,
        "hamiltonian_hash": hamiltonian_fingerprint(h),
        "final_order": schedule.final_order,
        "swap_layers": schedule.metadata["swap_layers"],
        "layer_bound": schedule.metadata["layer_bound"],
        "within_bound": schedule.metadata["within_bound"],
        "hubbard": inst.to_dict(),
    }
    circuit = build_circuit(inst.n_modes, layers, metadata)
    logger.info(f"Hubbard {inst.rows}x{inst.cols} step: {circuit.two_qubit_count} two-qubit gates, "
                f"{schedule.swap_layer_count} swap layers, depth {circuit.depth}")
    return circuit

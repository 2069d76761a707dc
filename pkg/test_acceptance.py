"""End-to-end checks of the structural and numerical guarantees"""

import numpy as np
import pytest

from fermiswap.modules.hamiltonian import (
    build_hamiltonian,
    hubbard_2d,
    hubbard_to_hamiltonian,
    jordan_wigner,
    pauli_to_dense,
    random_hamiltonian,
)
from fermiswap.modules.simcheck import (
    apply_circuit,
    circuit_to_dense,
    commutes_with_number,
    evolution_error,
    evolution_reference,
    fidelity,
    hartree_fock_state,
    operator_distance,
    random_state,
    slater_amplitudes,
    thouless_unitary,
    trotter_error,
    trotter_reference,
)
from fermiswap.modules.slaterprep import (
    givens_decompose,
    plan_to_circuit,
    random_slater,
    random_unitary,
    slater_prep_circuit,
    spin_split_prep,
)
from fermiswap.modules.swapnet import (
    circuit_stats,
    hubbard_swap_schedule,
    swap_network_schedule,
    synthesize_hubbard_trotter,
    synthesize_trotter_evolution,
    synthesize_trotter_step,
)


@pytest.mark.parametrize("n", range(2, 65))
def test_first_order_gate_count_and_depth(n):
    c = synthesize_trotter_step(random_hamiltonian(n, n), 0.01)
    assert c.two_qubit_count == n * (n - 1) // 2
    assert c.metadata["swap_layers"] == (n if n >= 3 else 1)
    assert c.depth == c.metadata["swap_layers"] + 1
    assert c.metadata["final_order"] == list(reversed(range(n)))


@pytest.mark.parametrize("n", [4, 5, 6])
def test_trotter_correctness(n):
    sched = swap_network_schedule(n)
    for seed in range(20):
        h = random_hamiltonian(n, 1000 * n + seed)
        c = synthesize_trotter_step(h, 0.05)
        assert operator_distance(circuit_to_dense(c), trotter_reference(h, sched, 0.05, 1)) <= 1e-10


def _normalized(h):
    norm = np.linalg.norm(pauli_to_dense(jordan_wigner(h)), 2)
    return build_hamiltonian(h.T / norm, h.U / norm, h.V / norm)


@pytest.mark.parametrize("order, low, high", [(1, 3.5, 4.5), (2, 7.0, 9.0)])
def test_trotter_error_scaling(order, low, high):
    h = _normalized(random_hamiltonian(4, 21))
    t = 1e-2
    ratio = trotter_error(h, t, order) / trotter_error(h, t / 2, order)
    assert low <= ratio <= high


@pytest.mark.parametrize("n", range(2, 33))
def test_givens_depth_bounds(n):
    plan = givens_decompose(random_unitary(n, seed=n))
    assert plan.depth <= max(2 * n - 3, 1)
    assert plan.rotation_count <= n * (n - 1) // 2


def test_nine_mode_elimination_labels():
    n = 9
    orthogonal, _ = np.linalg.qr(np.random.default_rng(77).normal(size=(n, n)))
    plan = givens_decompose(orthogonal)
    assert plan.depth == 15
    labels = {(r.q, r.column): index + 1 for index, layer in enumerate(plan.layers) for r in layer}
    assert len(labels) == 36
    assert all(label == 2 * j + n - q for (q, j), label in labels.items())


def test_slater_preparation_fidelity():
    rng = np.random.default_rng(5)
    for trial in range(50):
        n = int(rng.integers(2, 11))
        eta = int(rng.integers(1, n + 1))
        d = random_slater(n, eta, seed=trial)
        c = slater_prep_circuit(d)
        psi = apply_circuit(hartree_fock_state(n, eta), c)
        assert fidelity(slater_amplitudes(d), psi) >= 1 - 1e-10
        assert c.metadata["rotations"] <= eta * (n - eta)
        assert "within_depth_claim" in c.metadata


@pytest.mark.parametrize("n", [6, 8, 10])
def test_spin_split_depth(n):
    half = n // 2
    c = spin_split_prep(random_slater(half, half // 2, seed=1), random_slater(half, half - half // 2, seed=2))
    assert c.depth <= n - 3


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_thouless_homomorphism(n):
    for k in range(20):
        ua, ub = random_unitary(n, seed=2 * k), random_unitary(n, seed=2 * k + 1)
        assert np.linalg.norm(thouless_unitary(ua) @ thouless_unitary(ub) - thouless_unitary(ua @ ub)) <= 1e-9


@pytest.mark.parametrize("rows", range(1, 5))
@pytest.mark.parametrize("cols", range(1, 5))
def test_hubbard_terms_serviced_once_when_adjacent(rows, cols):
    inst = hubbard_2d(rows, cols, 1.0, 4.0)
    sched = hubbard_swap_schedule(inst)
    expected = set(inst.hop_edges) | set(inst.onsite_pairs)
    serviced = []
    for stage in sched.stages:
        for g in stage.services:
            assert g.positions[1] == g.positions[0] + 1
            serviced.append(g.term)
    assert sorted(serviced) == sorted(expected)


def test_two_by_two_hubbard_matches_reference():
    inst = hubbard_2d(2, 2, 1.0, 4.0)
    c = synthesize_hubbard_trotter(inst, 0.01)
    reference = trotter_reference(hubbard_to_hamiltonian(inst), hubbard_swap_schedule(inst), 0.01, 1)
    assert operator_distance(circuit_to_dense(c), reference) <= 1e-10


def test_four_by_four_swap_layers_reported():
    c = synthesize_hubbard_trotter(hubbard_2d(4, 4, 1.0, 4.0), 0.01)
    assert c.metadata["layer_bound"] == 12
    assert c.metadata["swap_layers"] == 19
    assert c.metadata["within_bound"] is False
    assert circuit_stats(c)["two_qubit_count"] >= 16 + 48


def _all_circuits():
    yield synthesize_trotter_step(random_hamiltonian(6, 1), 0.1, 1)
    yield synthesize_trotter_step(random_hamiltonian(6, 2), 0.1, 2)
    yield synthesize_hubbard_trotter(hubbard_2d(2, 2, 1.0, 4.0), 0.1)
    yield slater_prep_circuit(random_slater(8, 3, seed=4))
    yield spin_split_prep(random_slater(4, 2, seed=5), random_slater(4, 1, seed=6))
    yield plan_to_circuit(givens_decompose(random_unitary(7, seed=7)))


@pytest.mark.parametrize("index", range(6))
def test_number_conservation_and_norm(index):
    c = list(_all_circuits())[index]
    psi = random_state(c.n_qubits, index)
    assert abs(np.linalg.norm(apply_circuit(psi, c)) - 1) <= 1e-10
    assert commutes_with_number(circuit_to_dense(c))


@pytest.mark.parametrize("order", [1, 2, 4])
@pytest.mark.parametrize("steps", [1, 2, 3])
def test_evolution_matches_reference(order, steps):
    h = random_hamiltonian(4, 50 + steps)
    c = synthesize_trotter_evolution(h, 0.05, steps, order)
    assert operator_distance(circuit_to_dense(c), evolution_reference(h, 0.05, steps, order)) <= 1e-10


def test_fourth_order_error_scaling():
    h = _normalized(random_hamiltonian(4, 21))
    ratio = evolution_error(h, 0.05, 1, 4) / evolution_error(h, 0.025, 1, 4)
    assert 20 <= ratio <= 40


def test_fourth_order_beats_second_order():
    h = _normalized(random_hamiltonian(4, 22))
    assert evolution_error(h, 0.05, 2, 4) < evolution_error(h, 0.05, 2, 2)


@pytest.mark.parametrize("rows, cols", [(1, 3), (2, 2), (2, 3)])
def test_spinless_hubbard_matches_reference(rows, cols):
    inst = hubbard_2d(rows, cols, 1.0, 4.0, spinless=True)
    c = synthesize_hubbard_trotter(inst, 0.05)
    reference = trotter_reference(hubbard_to_hamiltonian(inst), hubbard_swap_schedule(inst), 0.05, 1)
    assert operator_distance(circuit_to_dense(c), reference) <= 1e-10

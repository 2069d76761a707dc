import math

import numpy as np
import pytest

from fermiswap.core.errors import BranchCutError, InputValidationError, SizeLimitError
from fermiswap.models.circuit import Circuit, Gate
from fermiswap.modules.hamiltonian import build_hamiltonian, random_hamiltonian
from fermiswap.modules.simcheck import (
    VerificationReport,
    apply_circuit,
    circuit_to_dense,
    commutes_with_number,
    evolution_reference,
    exact_evolution,
    fidelity,
    hartree_fock_state,
    network_permutation,
    operator_distance,
    random_state,
    slater_amplitudes,
    thouless_unitary,
    trotter_reference,
)
from fermiswap.modules.slaterprep import random_slater, random_unitary, slater_determinant, slater_prep_circuit
from fermiswap.modules.swapnet import fsim_matrix, swap_network_schedule, synthesize_trotter_step
from fermiswap.utils.matrix_utils import check_unitary


def random_circuit(n, depth, seed):
    rng = np.random.default_rng(seed)
    layers = []
    for _ in range(depth):
        layer, q = [], int(rng.integers(0, 2))
        while q < n:
            kind = rng.choice(["fsim", "givens", "phase", "fswap"])
            a, b = rng.uniform(-math.pi, math.pi, size=2)
            if kind == "phase" or q == n - 1:
                layer.append(Gate.phase(q, a))
                q += 1
            elif kind == "fsim":
                layer.append(Gate.fsim(q, a, b, swap=bool(rng.integers(0, 2))))
                q += 2
            elif kind == "givens":
                layer.append(Gate.givens(q, a, b))
                q += 2
            else:
                layer.append(Gate.fswap(q))
                q += 2
        layers.append(tuple(layer))
    return Circuit(n_qubits=n, layers=tuple(layers))


def test_empty_circuit_leaves_state_unchanged():
    psi = random_state(3, 0)
    assert np.array_equal(apply_circuit(psi, Circuit(n_qubits=3)), psi)


def test_fswap_moves_particle_without_sign():
    psi = np.zeros(4, dtype=complex)
    psi[1] = 1.0
    out = apply_circuit(psi, Circuit(n_qubits=2, layers=((Gate.fswap(0),),)))
    assert np.allclose(out, [0, 0, 1, 0])


def test_fswap_of_pair_picks_up_sign():
    psi = np.zeros(4, dtype=complex)
    psi[3] = 1.0
    out = apply_circuit(psi, Circuit(n_qubits=2, layers=((Gate.fswap(0),),)))
    assert np.allclose(out, [0, 0, 0, -1])


def test_state_size_mismatch():
    with pytest.raises(InputValidationError):
        apply_circuit(np.ones(8), Circuit(n_qubits=2))


@pytest.mark.parametrize("seed", range(100))
def test_apply_matches_dense_product(seed):
    c = random_circuit(6, 8, seed)
    psi = random_state(6, seed)
    assert np.max(np.abs(apply_circuit(psi, c) - circuit_to_dense(c) @ psi)) < 1e-12
    assert abs(np.linalg.norm(apply_circuit(psi, c)) - 1) < 1e-12


def test_threaded_application_is_bit_identical():
    c = random_circuit(13, 6, 42)
    psi = random_state(13, 7)
    assert np.array_equal(apply_circuit(psi, c, threads=1), apply_circuit(psi, c, threads=3))


def test_identity_circuit_is_identity():
    assert np.array_equal(circuit_to_dense(Circuit(n_qubits=3)), np.eye(8))


def test_single_fsim_embedding():
    c = Circuit(n_qubits=2, layers=((Gate.fsim(0, 0.3, 1.1),),))
    assert np.allclose(circuit_to_dense(c), fsim_matrix(0.3, 1.1), atol=1e-15)


def test_disjoint_gates_commute():
    a, b = Gate.givens(0, 0.4, 0.2), Gate.fsim(2, 0.7, -0.5)
    one = circuit_to_dense(Circuit(n_qubits=4, layers=((a, b),)))
    two = circuit_to_dense(Circuit(n_qubits=4, layers=((b, a),)))
    assert np.allclose(one, two, atol=1e-15)


def test_dense_size_limit():
    with pytest.raises(SizeLimitError):
        circuit_to_dense(Circuit(n_qubits=13))


def test_exact_evolution_trivial_cases():
    zero = build_hamiltonian(np.zeros((2, 2)), np.zeros(2), np.zeros((2, 2)))
    assert np.allclose(exact_evolution(zero, 0.7), np.eye(4))
    assert np.allclose(exact_evolution(random_hamiltonian(3, 1), 0.0), np.eye(8))


def test_exact_evolution_single_hop():
    t = 0.37
    T = np.array([[0.0, 1.0], [1.0, 0.0]])
    U = exact_evolution(build_hamiltonian(T, np.zeros(2), np.zeros((2, 2))), t)
    block = np.array([[math.cos(t), -1j * math.sin(t)], [-1j * math.sin(t), math.cos(t)]])
    assert np.allclose(U[np.ix_([1, 2], [1, 2])], block, atol=1e-13)
    assert np.isclose(U[0, 0], 1.0) and np.isclose(U[3, 3], 1.0)


def test_commuting_terms_reproduce_exact_evolution(rng):
    n = 4
    V = rng.uniform(-1, 1, size=(n, n))
    V = (V + V.T) / 2
    np.fill_diagonal(V, 0.0)
    h = build_hamiltonian(np.diag(rng.uniform(-1, 1, n)), rng.uniform(-1, 1, n), V)
    sched = swap_network_schedule(n)
    reference = network_permutation(sched).conj().T @ trotter_reference(h, sched, 0.3, 1)
    assert operator_distance(reference, exact_evolution(h, 0.3)) < 1e-12


@pytest.mark.parametrize("order", [1, 2])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_trotter_circuit_matches_reference(n, order):
    h = random_hamiltonian(n, seed=n)
    c = synthesize_trotter_step(h, 0.01, order)
    reference = trotter_reference(h, swap_network_schedule(n), 0.01, order)
    assert operator_distance(circuit_to_dense(c), reference) < 1e-10


def test_reference_size_limit():
    h = random_hamiltonian(11, 0)
    with pytest.raises(SizeLimitError):
        trotter_reference(h, swap_network_schedule(11), 0.1)


def test_thouless_identity():
    assert np.allclose(thouless_unitary(np.eye(3)), np.eye(8))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_thouless_homomorphism(n):
    for k in range(5):
        ua, ub = random_unitary(n, seed=k), random_unitary(n, seed=100 + k)
        left = thouless_unitary(ua) @ thouless_unitary(ub)
        assert np.linalg.norm(left - thouless_unitary(ua @ ub)) <= 1e-9


def test_thouless_single_particle_rotation():
    alpha = 0.4
    u = np.array([[math.cos(alpha), -math.sin(alpha)], [math.sin(alpha), math.cos(alpha)]])
    psi = thouless_unitary(u) @ hartree_fock_state(2, 1)
    assert np.allclose(psi, [0, math.cos(alpha), math.sin(alpha), 0], atol=1e-12)


def test_thouless_branch_cut_rejected():
    with pytest.raises(BranchCutError):
        thouless_unitary(np.diag([-1.0, 1.0]))


def test_slater_amplitudes_of_reference_rows():
    psi = slater_amplitudes(slater_determinant(np.eye(4)[:2]))
    assert psi[3] == 1.0
    assert np.count_nonzero(psi) == 1


def test_slater_amplitudes_single_particle():
    d = random_slater(4, 1, seed=3)
    psi = slater_amplitudes(d)
    assert np.allclose(psi[[1, 2, 4, 8]], d.Q[0])


def test_slater_amplitudes_match_thouless_state():
    W = random_unitary(4, seed=6)
    d = slater_determinant(W[:2])
    psi = thouless_unitary(W.T) @ hartree_fock_state(4, 2)
    assert np.allclose(psi, slater_amplitudes(d), atol=1e-10)


def test_operator_distance():
    A = random_unitary(4, seed=1)
    assert operator_distance(A, A) == 0.0
    assert operator_distance(A, np.exp(0.8j) * A) < 1e-12
    E = random_unitary(4, seed=2)
    E = E / np.linalg.norm(E)
    assert operator_distance(A + 1e-3 * E, A) <= 1e-3 + 1e-15
    with pytest.raises(InputValidationError):
        operator_distance(A, np.eye(3))


def test_plain_distance_sees_global_phase():
    A = np.eye(2)
    assert np.isclose(operator_distance(A, -A, phase_aligned=False), np.linalg.norm(2 * A))


def test_synthesized_circuits_conserve_number():
    trotter = circuit_to_dense(synthesize_trotter_step(random_hamiltonian(5, 1), 0.2, 2))
    slater = circuit_to_dense(slater_prep_circuit(random_slater(5, 2, seed=1)))
    assert commutes_with_number(trotter)
    assert commutes_with_number(slater)


def test_fidelity_of_state_with_itself():
    psi = random_state(4, 3)
    assert np.isclose(fidelity(psi, psi), 1.0)


def test_report_uses_pass_key():
    report = VerificationReport(check="x", n=2, metric=0.0, tolerance=1e-10, passed=True, seconds=0.1)
    assert list(report.to_dict()) == ["check", "n", "metric", "tolerance", "pass", "seconds"]


def test_check_unitary():
    u = random_unitary(4, seed=1)
    assert check_unitary(u, 1e-10).dtype == complex
    with pytest.raises(InputValidationError):
        check_unitary(np.ones((2, 3)), 1e-10)
    with pytest.raises(InputValidationError):
        check_unitary(u * 1.001, 1e-10)


def test_evolution_reference_argument_checks():
    with pytest.raises(InputValidationError):
        evolution_reference(random_hamiltonian(3, 0), 0.1, 2, order=3)
    with pytest.raises(SizeLimitError):
        evolution_reference(random_hamiltonian(11, 0), 0.1, 2)


def test_two_step_first_order_reference_returns_layout():
    h = random_hamiltonian(3, 5)
    sched = swap_network_schedule(3)
    one = trotter_reference(h, sched, 0.1, 1)
    two = evolution_reference(h, 0.1, 2, 1)
    # the second step acts on the reversed layout, so two steps are not one step squared
    assert operator_distance(two, one @ one) > 1e-6
    assert commutes_with_number(two)

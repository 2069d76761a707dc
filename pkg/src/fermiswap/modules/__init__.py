from .hamiltonian import (
    build_hamiltonian,
    hubbard_2d,
    hubbard_to_hamiltonian,
    jordan_wigner,
    random_hamiltonian,
)
from .swapnet import (
    circuit_stats,
    fsim_matrix,
    hubbard_swap_schedule,
    swap_network_schedule,
    synthesize_hubbard_trotter,
    synthesize_trotter_evolution,
    synthesize_trotter_step,
)
from .slaterprep import (
    apply_phased_givens,
    givens_decompose,
    plan_to_circuit,
    slater_prep_circuit,
    spin_split_prep,
)
from .simcheck import (
    apply_circuit,
    circuit_to_dense,
    evolution_reference,
    exact_evolution,
    operator_distance,
    slater_amplitudes,
    thouless_unitary,
    trotter_reference,
)

__all__ = [
    "build_hamiltonian", "hubbard_2d", "hubbard_to_hamiltonian", "jordan_wigner", "random_hamiltonian",
    "circuit_stats", "fsim_matrix", "hubbard_swap_schedule", "swap_network_schedule",
    "synthesize_hubbard_trotter", "synthesize_trotter_evolution", "synthesize_trotter_step",
    "apply_phased_givens", "givens_decompose", "plan_to_circuit", "slater_prep_circuit", "spin_split_prep",
    "apply_circuit", "circuit_to_dense", "evolution_reference", "exact_evolution", "operator_distance",
    "slater_amplitudes", "thouless_unitary", "trotter_reference",
]

from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ..models.circuit import Circuit
from ..models.givens import SlaterDeterminant
from ..models.hamiltonian import FermionHamiltonian
from ..models.schemas import CIRCUIT_SCHEMA
from ..modules.hamiltonian import (
    hamiltonian_fingerprint,
    hamiltonian_from_dict,
    hubbard_2d,
    hubbard_to_hamiltonian,
    load_hamiltonian,
    load_hubbard,
)
from ..modules.simcheck import (
    VerificationReport,
    apply_circuit,
    circuit_to_dense,
    evolution_reference,
    fidelity,
    hartree_fock_state,
    operator_distance,
    random_state,
    slater_amplitudes,
    thouless_unitary,
    timed_check,
    trotter_reference,
)
from ..modules.slaterprep import (
    givens_decompose,
    load_unitary_input,
    plan_to_circuit,
    slater_determinant,
    slater_prep_circuit,
)
from ..modules.swapnet import (
    circuit_stats,
    hubbard_swap_schedule,
    swap_network_schedule,
    synthesize_hubbard_trotter,
    synthesize_trotter_evolution,
    synthesize_trotter_step,
)
from ..utils.file_utils import dump_json, load_json
from ..utils.logger import logger
from .config_loader import ConfigLoader, FrameworkConfig, RunConfig
from .errors import InputValidationError, VerificationError


def _matrix_from_dict(data: Dict[str, Any]) -> np.ndarray:
    re = np.array(data["re"], dtype=float)
    im = np.array(data["im"], dtype=float)
    return (re + 1j * im).reshape(-1, data["n"])


class SynthesisRunner:
    """Runs one fermiswap command and keeps run statistics"""

    def __init__(self, config: RunConfig, framework_config: Optional[FrameworkConfig] = None):
        self.config = config
        self.framework_config = framework_config or ConfigLoader(str(config.config_dir)).load()
        self.tolerances = self.framework_config.tolerances
        self.limits = self.framework_config.limits
        self.last_report: Optional[VerificationReport] = None
        self.last_stats: Optional[Dict[str, Any]] = None

        self.stats = {
            "command": config.command,
            "circuits_written": 0,
            "checks_run": 0,
            "checks_passed": 0,
            "checks_failed": 0,
            "start_time": None,
            "end_time": None,
        }

    def run(self) -> int:
        """Dispatch the configured command; returns the exit status"""
        self.stats["start_time"] = datetime.now()
        handlers = {
            "synth-trotter": self.synth_trotter,
            "synth-slater": self.synth_slater,
            "synth-hubbard": self.synth_hubbard,
            "verify": self.verify,
            "stats": self.circuit_stats,
        }
        try:
            return handlers[self.config.command]()
        finally:
            self.stats["end_time"] = datetime.now()
            self._print_summary()

    def _require_input(self) -> Path:
        if self.config.input_path is None:
            raise InputValidationError(f"{self.config.command} requires --in")
        return self.config.input_path

    def _write_circuit(self, circuit: Circuit) -> int:
        stats = circuit_stats(circuit)
        circuit = circuit.with_metadata(stats=stats)
        self.last_stats = stats
        if self.config.output_path is not None:
            dump_json(circuit.to_dict(), self.config.output_path)
            self.stats["circuits_written"] += 1
            logger.info(f"Circuit written to {self.config.output_path}")
        return 0

    def synth_trotter(self) -> int:
        h = load_hamiltonian(self._require_input(), self.tolerances.symmetry)
        if self.config.steps == 1 and self.config.order != 4:
            return self._write_circuit(synthesize_trotter_step(h, self.config.t, self.config.order))
        return self._write_circuit(
            synthesize_trotter_evolution(h, self.config.t, self.config.steps, self.config.order))

    def synth_hubbard(self) -> int:
        inst = load_hubbard(self._require_input())
        return self._write_circuit(synthesize_hubbard_trotter(inst, self.config.t))

    def synth_slater(self) -> int:
        source = load_unitary_input(self._require_input(), self.tolerances.unitarity,
                                    self.tolerances.orthonormality)
        if isinstance(source, SlaterDeterminant):
            return self._write_circuit(slater_prep_circuit(source, self.tolerances.zero_pivot))

        plan = givens_decompose(source, self.tolerances.unitarity, self.tolerances.zero_pivot)
        unitary = {
            "n": int(source.shape[0]),
            "re": [float(x) for x in source.real.ravel()],
            "im": [float(x) for x in source.imag.ravel()],
        }
        return self._write_circuit(plan_to_circuit(plan, invert=True).with_metadata(unitary=unitary))

    def _load_circuit(self) -> Circuit:
        path = self._require_input()
        return Circuit.from_dict(load_json(path, CIRCUIT_SCHEMA), str(path))

    def circuit_stats(self) -> int:
        circuit = self._load_circuit()
        self.last_stats = circuit_stats(circuit)
        if self.config.output_path is not None:
            dump_json(self.last_stats, self.config.output_path)
        return 0

    def verify(self) -> int:
        circuit = self._load_circuit()
        reports = self.verify_circuit(circuit)
        failed = [report for report in reports if not report.passed]
        self.stats["checks_run"] += len(reports)
        self.stats["checks_failed"] += len(failed)
        self.stats["checks_passed"] += len(reports) - len(failed)

        report = failed[0] if failed else reports[0]
        self.last_report = report
        if self.config.output_path is not None:
            dump_json(report.to_dict(), self.config.output_path)
        if failed:
            raise VerificationError(f"{report.check}: metric {report.metric:.3e} exceeds "
                                    f"tolerance {report.tolerance:.1e}")
        return 0

    def _slater(self, data: Dict[str, Any]) -> SlaterDeterminant:
        return slater_determinant(_matrix_from_dict(data), self.tolerances.orthonormality)

    def _operator_checks(self, check: str, circuit: Circuit,
                         reference: np.ndarray) -> List[VerificationReport]:
        """Dense operator distance, then the statevector path on a seeded random state"""
        n = circuit.n_qubits
        tol = self.config.tolerance
        primary = timed_check(check, n, tol, lambda: operator_distance(
            circuit_to_dense(circuit, self.limits.max_dense_qubits), reference))
        psi = random_state(n, self.config.seed)
        state = timed_check(f"{check}_state", n, tol, lambda: 1.0 - fidelity(
            reference @ psi, apply_circuit(psi, circuit, self.config.threads)))
        return [primary, state]

    def _state_check(self, check: str, circuit: Circuit, start: np.ndarray,
                     target: Callable[[], np.ndarray]) -> List[VerificationReport]:
        return [timed_check(check, circuit.n_qubits, self.config.tolerance, lambda: 1.0 - fidelity(
            target(), apply_circuit(start, circuit, self.config.threads)))]

    def _embedded_hamiltonian(self, meta: Dict[str, Any]) -> FermionHamiltonian:
        h = hamiltonian_from_dict(meta["hamiltonian"], tol=self.tolerances.symmetry)
        if meta.get("hamiltonian_hash") not in (None, hamiltonian_fingerprint(h)):
            raise InputValidationError("Embedded Hamiltonian does not match its recorded hash")
        return h

    def verify_circuit(self, circuit: Circuit) -> List[VerificationReport]:
        """Select the oracle matching the circuit's scope; the primary report comes first"""
        meta = circuit.metadata
        scope = meta.get("scope")
        max_reference = self.limits.max_trotter_reference_qubits
        max_modes = self.limits.max_slater_modes

        if scope == "trotter":
            h = self._embedded_hamiltonian(meta)
            reference = trotter_reference(h, swap_network_schedule(h.n_modes), meta["t"], meta["order"],
                                          max_reference)
            return self._operator_checks("trotter_reference", circuit, reference)

        if scope == "evolution":
            h = self._embedded_hamiltonian(meta)
            reference = evolution_reference(h, meta["t"], meta["steps"], meta["order"], max_reference)
            return self._operator_checks("evolution_reference", circuit, reference)

        if scope == "hubbard":
            spec = meta["hubbard"]
            inst = hubbard_2d(spec["rows"], spec["cols"], spec["t"], spec["U"],
                              spinless=spec.get("spinless", False))
            h = hubbard_to_hamiltonian(inst)
            reference = trotter_reference(h, hubbard_swap_schedule(inst), meta["t"], 1, max_reference)
            return self._operator_checks("hubbard_trotter_reference", circuit, reference)

        if scope == "rotation":
            reference = thouless_unitary(_matrix_from_dict(meta["unitary"]), self.tolerances.branch_cut,
                                         self.tolerances.unitarity, self.limits.max_thouless_modes)
            if not meta.get("invert", True):
                reference = reference.conj().T
            return self._operator_checks("thouless_unitary", circuit, reference)

        if scope == "slater":
            d = self._slater(meta["slater"])
            return self._state_check("slater_fidelity", circuit, hartree_fock_state(d.n, d.eta),
                                     lambda: slater_amplitudes(d, max_modes))

        if scope == "spin_split":
            up, down = self._slater(meta["up"]), self._slater(meta["down"])
            start = np.kron(hartree_fock_state(down.n, down.eta), hartree_fock_state(up.n, up.eta))
            return self._state_check("spin_split_fidelity", circuit, start, lambda: np.kron(
                slater_amplitudes(down, max_modes), slater_amplitudes(up, max_modes)))

        raise InputValidationError(f"Circuit metadata has no verifiable scope (got {scope!r})")

    def _print_summary(self):
        """Print run summary"""

        duration = (self.stats["end_time"] - self.stats["start_time"]).total_seconds()

        logger.info("=" * 60)
        logger.info(f"FERMISWAP {self.stats['command'].upper()} SUMMARY")
        logger.info("=" * 60)
        logger.info(f"Circuits written: {self.stats['circuits_written']}")
        logger.info(f"Checks run: {self.stats['checks_run']}")
        logger.info(f"Checks passed: {self.stats['checks_passed']}")
        logger.info(f"Checks failed: {self.stats['checks_failed']}")
        logger.info(f"Total duration: {duration:.2f} seconds")

        if self.stats['checks_failed'] > 0:
            logger.warning("Some verification checks failed!")

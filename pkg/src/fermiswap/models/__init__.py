from .circuit import Circuit, Gate, build_circuit
from .givens import GivensPlan, GivensRotation, SlaterDeterminant
from .hamiltonian import FermionHamiltonian, HubbardInstance, PauliHamiltonian
from .schedule import ScheduleStage, StageGate, SwapSchedule

__all__ = [
    "Circuit", "Gate", "build_circuit",
    "GivensPlan", "GivensRotation", "SlaterDeterminant",
    "FermionHamiltonian", "HubbardInstance", "PauliHamiltonian",
    "ScheduleStage", "StageGate", "SwapSchedule",
]

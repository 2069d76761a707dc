from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class StageGate(BaseModel):
    """One adjacent-pair operation inside a schedule stage.

    swap: the two resident orbitals are exchanged.
    service: the interaction between the two resident orbitals is applied here.
    """
    model_config = ConfigDict(frozen=True)

    positions: Tuple[int, int]
    orbitals: Tuple[int, int]
    swap: bool = True
    service: bool = True

    @model_validator(mode='after')
    def validate_pair(self) -> 'StageGate':
        if self.positions[1] != self.positions[0] + 1:
            raise ValueError(f"Positions must be adjacent, got {self.positions}")
        if not (self.swap or self.service):
            raise ValueError("Stage gate neither swaps nor services")
        return self

    @property
    def term(self) -> Tuple[int, int]:
        """Unordered orbital pair, smaller label first"""
        return tuple(sorted(self.orbitals))


class ScheduleStage(BaseModel):
    """Gates executed in one circuit layer"""
    model_config = ConfigDict(frozen=True)

    gates: Tuple[StageGate, ...]

    @model_validator(mode='after')
    def validate_disjoint(self) -> 'ScheduleStage':
        used = set()
        for g in self.gates:
            for p in g.positions:
                if p in used:
                    raise ValueError(f"Position {p} appears twice in one stage")
                used.add(p)
        return self

    @property
    def swaps(self) -> List[Tuple[int, int]]:
        return [g.positions for g in self.gates if g.swap]

    @property
    def services(self) -> List[StageGate]:
        return [g for g in self.gates if g.service]


class SwapSchedule(BaseModel):
    """Fermionic swap network with the orbital pair serviced by each gate"""
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    stages: Tuple[ScheduleStage, ...] = Field(default_factory=tuple)
    metadata: Dict[str, object] = Field(default_factory=dict)
    # orbital resident at each position before the first stage; empty means identity
    initial_order: Tuple[int, ...] = ()

    @model_validator(mode='after')
    def validate_trace(self) -> 'SwapSchedule':
        if self.initial_order and sorted(self.initial_order) != list(range(self.n)):
            raise ValueError(f"initial_order {self.initial_order} is not a permutation of {self.n} orbitals")
        order = self.start_order
        for index, stage in enumerate(self.stages):
            for g in stage.gates:
                i, j = g.positions
                if j >= self.n:
                    raise ValueError(f"Stage {index}: position {j} out of range")
                if (order[i], order[j]) != g.orbitals:
                    raise ValueError(f"Stage {index}: orbitals {g.orbitals} are not resident at {g.positions}")
            for i, j in stage.swaps:
                order[i], order[j] = order[j], order[i]
        return self

    @property
    def start_order(self) -> List[int]:
        return list(self.initial_order) if self.initial_order else list(range(self.n))

    @property
    def layers(self) -> List[List[Tuple[int, int]]]:
        """Swap layers (stages that exchange at least one pair)"""
        return [stage.swaps for stage in self.stages if stage.swaps]

    @property
    def orbital_trace(self) -> List[List[Tuple[int, int]]]:
        """Orbitals resident on each swapped pair, per swap layer"""
        return [[g.orbitals for g in stage.gates if g.swap]
                for stage in self.stages if stage.swaps]

    @property
    def swap_layer_count(self) -> int:
        return len(self.layers)

    @property
    def transposition_count(self) -> int:
        return sum(len(layer) for layer in self.layers)

    @property
    def final_order(self) -> List[int]:
        """Orbital resident at each position after all swaps"""
        order = self.start_order
        for stage in self.stages:
            for i, j in stage.swaps:
                order[i], order[j] = order[j], order[i]
        return order

    def serviced_terms(self) -> List[Tuple[int, int]]:
        """Unordered orbital pairs in the order they are serviced"""
        return [g.term for stage in self.stages for g in stage.services]

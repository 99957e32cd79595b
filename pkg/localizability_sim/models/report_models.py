"""
Pydantic models for oracle verdicts, run traces and experiment reports.
"""

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from .network_models import ExperimentConfig
from .protocol_models import NodeState


class EdgeCountClass(str, Enum):
    UNDER = "under"
    MINIMAL = "minimal"
    CIRCUIT = "circuit"
    OVER = "over"


class SubsetWitness(BaseModel):
    vertex_set: List[int] = Field(..., description="Vertices of the offending subset.")
    edge_count: int = Field(..., description="Edges induced by the subset.")


class RigidityVerdict(BaseModel):
    vertex_count: int
    edge_count: int
    sparsity_ok: bool = Field(..., description="Every edge independent ((2,3)-sparse).")
    edge_count_class: EdgeCountClass
    rigid: bool
    minimally_rigid: bool
    m_circuit: bool
    redundantly_rigid: bool
    connectivity: int = Field(..., ge=0, description="Vertex connectivity.")
    globally_rigid: bool
    witness: Optional[SubsetWitness] = Field(
        None, description="Densest violating subset, when brute force ran."
    )


class NodeWitness(BaseModel):
    node: int
    component: int = Field(..., description="Index of the redundantly rigid component.")
    beacons: List[int] = Field(..., description="Three distinct beacon endpoints.")
    paths: List[List[int]] = Field(..., description="Vertex-disjoint paths to them.")


class LocalizabilitySet(BaseModel):
    """Nodes that satisfy both RR3P conditions, plus every beacon."""

    localizable: List[int] = Field(..., description="Sorted ids of the RR3P set.")
    witnesses: Dict[int, NodeWitness] = Field(default_factory=dict)
    components: List[List[int]] = Field(
        default_factory=list, description="Redundantly rigid components."
    )
    degenerate: bool = Field(
        False, description="Fewer than three beacons, or all beacons on one line."
    )


class StateTransition(BaseModel):
    round: int
    node: int
    old: NodeState
    new: NodeState


class RunTrace(BaseModel):
    protocol: str
    budget: int
    rounds_executed: int
    converged: bool
    broadcasts_per_node: Dict[int, int]
    state_messages_per_node: Dict[int, int]
    control_messages: int = Field(0, description="QUERY, CONFIRM and HELLO total.")
    transitions: List[StateTransition] = Field(default_factory=list)
    final_states: Dict[int, NodeState]
    localizable_by_round: List[int] = Field(
        default_factory=list,
        description="Localizable count (beacons included) after each round.",
    )
    relocations: List[int] = Field(default_factory=list)


class RunReport(BaseModel):
    protocol: str
    config: Optional[ExperimentConfig] = None
    S: int
    C: int = Field(..., description="Nodes detected localizable, beacons included.")
    L: float = Field(..., ge=0, le=1, description="Detection accuracy C/S.")
    rr3p_size: Optional[int] = None
    rounds: int = Field(..., description="Run cycles P until the last transition.")
    converged: bool
    broadcasts: int
    energy_units: float = Field(..., description="0.06 * P * T joules.")
    final_states: Dict[int, NodeState]
    sound: Optional[bool] = None
    violations: List[int] = Field(default_factory=list)


class SweepCell(BaseModel):
    protocol: str
    B: float
    N: float
    runs: int
    mean_L: float
    min_L: float
    max_L: float


class EnergyRow(BaseModel):
    protocol: str
    fraction: float
    runs: int
    mean_cycles: float
    mean_joules: float


class ScenarioReport(BaseModel):
    name: str
    description: str
    labels: Dict[int, str]
    rr3p: Optional[List[int]] = None
    reports: Dict[str, RunReport]
    skipped: List[str] = Field(default_factory=list)


class PropertyResult(BaseModel):
    name: str
    cases: int
    failures: int
    counterexample: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

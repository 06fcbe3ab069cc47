from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing import Annotated, Dict, List, Literal, Optional, Sequence, Tuple
from enum import Enum

NonNegativeFinite = Annotated[float, Field(ge=0.0, allow_inf_nan=False)]
FiniteFloat = Annotated[float, Field(allow_inf_nan=False)]

# ============================================================================
# ENUMS
# ============================================================================

class CertificateStatus(str, Enum):
    CERTIFIED_ALL_P = "certified_all_p"
    SUBMODULAR_UNCERTIFIED = "submodular_uncertified"
    NOT_SUBMODULAR = "not_submodular"

class SolvePolicy(str, Enum):
    REQUIRE_CERTIFIED = "certified"
    ALLOW_PER_P_CHECK = "per-p"

class TermPolicy(str, Enum):
    ANY = "any"
    SUBMODULAR = "submodular"
    CERTIFIED = "certified"

class CutSide(str, Enum):
    SOURCE_SIDE = "source_side"
    SINK_SIDE = "sink_side"

# ============================================================================
# ENERGY MODEL
# ============================================================================

class Topology(BaseModel):
    """Undirected graph of the labeling problem; edge order is kept as given."""
    model_config = ConfigDict(frozen=True)

    vertex_count: int = Field(..., ge=0, description="Number of vertices")
    edges: Tuple[Tuple[int, int], ...] = Field(default=(), description="Vertex-index pairs (i, j), i != j")

    @model_validator(mode="after")
    def _check_edges(self) -> "Topology":
        seen = set()
        for index, (i, j) in enumerate(self.edges):
            if i == j:
                raise ValueError(f"edge {index} is a self loop on vertex {i}")
            if not (0 <= i < self.vertex_count and 0 <= j < self.vertex_count):
                raise ValueError(f"edge {index} ({i}, {j}) has an endpoint outside 0..{self.vertex_count - 1}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"edge {index} ({i}, {j}) duplicates an earlier edge")
            seen.add(key)
        return self

class UnaryTerm(BaseModel):
    model_config = ConfigDict(frozen=True)

    cost0: NonNegativeFinite = Field(..., description="phi_i(0)")
    cost1: NonNegativeFinite = Field(..., description="phi_i(1)")

    @property
    def values(self) -> Tuple[float, float]:
        return (self.cost0, self.cost1)

class PairwiseTerm(BaseModel):
    """Cost table (a, b, c, d) = phi(0,0), phi(0,1), phi(1,0), phi(1,1)."""
    model_config = ConfigDict(frozen=True)

    a: NonNegativeFinite = Field(..., description="phi(0,0)")
    b: NonNegativeFinite = Field(..., description="phi(0,1)")
    c: NonNegativeFinite = Field(..., description="phi(1,0)")
    d: NonNegativeFinite = Field(..., description="phi(1,1)")

    @classmethod
    def of(cls, a: float, b: float, c: float, d: float) -> "PairwiseTerm":
        return cls(a=a, b=b, c=c, d=d)

    @property
    def values(self) -> Tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def scaled(self, factor: float) -> "PairwiseTerm":
        return PairwiseTerm(a=self.a * factor, b=self.b * factor, c=self.c * factor, d=self.d * factor)

class EnergyFunction(BaseModel):
    """Unary terms per vertex plus one pairwise table per edge, aligned with topology.edges."""
    model_config = ConfigDict(frozen=True)

    topology: Topology = Field(..., description="Vertices and undirected edges")
    unaries: Tuple[UnaryTerm, ...] = Field(default=(), description="One unary term per vertex")
    pairwise: Tuple[PairwiseTerm, ...] = Field(default=(), description="One pairwise table per edge")

    @model_validator(mode="after")
    def _check_lengths(self) -> "EnergyFunction":
        if len(self.unaries) != self.topology.vertex_count:
            raise ValueError(f"expected {self.topology.vertex_count} unary terms, got {len(self.unaries)}")
        if len(self.pairwise) != len(self.topology.edges):
            raise ValueError(f"expected {len(self.topology.edges)} pairwise terms, got {len(self.pairwise)}")
        return self

    @classmethod
    def from_tables(cls,
                    vertex_count: int,
                    unaries: Sequence[Sequence[float]],
                    edges: Sequence[Tuple[int, int, Sequence[float]]] = ()) -> "EnergyFunction":
        """Build from plain numbers: unaries [(c0, c1), ...], edges [(i, j, (a, b, c, d)), ...]."""
        return cls(
            topology=Topology(vertex_count=vertex_count, edges=tuple((i, j) for i, j, _ in edges)),
            unaries=tuple(UnaryTerm(cost0=c0, cost1=c1) for c0, c1 in unaries),
            pairwise=tuple(PairwiseTerm.of(*table) for _, _, table in edges),
        )

    @property
    def vertex_count(self) -> int:
        return self.topology.vertex_count

    @property
    def edges(self) -> Tuple[Tuple[int, int], ...]:
        return self.topology.edges

    @property
    def edge_count(self) -> int:
        return len(self.topology.edges)

class Labeling(BaseModel):
    model_config = ConfigDict(frozen=True)

    labels: Tuple[int, ...] = Field(..., description="Label of each vertex, 0 or 1")

    @field_validator("labels")
    @classmethod
    def _binary(cls, labels: Tuple[int, ...]) -> Tuple[int, ...]:
        for index, label in enumerate(labels):
            if label not in (0, 1):
                raise ValueError(f"label of vertex {index} must be 0 or 1, got {label}")
        return labels

    @classmethod
    def of(cls, labels: Sequence[int]) -> "Labeling":
        return cls(labels=tuple(int(label) for label in labels))

    @classmethod
    def from_string(cls, text: str) -> "Labeling":
        return cls(labels=tuple(int(ch) for ch in text.strip()))

    def as_string(self) -> str:
        return "".join(str(label) for label in self.labels)

    def __len__(self) -> int:
        return len(self.labels)

# ============================================================================
# CERTIFICATION, FLOW AND SOLUTIONS
# ============================================================================

class Certificate(BaseModel):
    model_config = ConfigDict(frozen=True)

    status: CertificateStatus = Field(..., description="Outcome of the all-p submodularity test")
    witness: Optional[float] = Field(None, description="Power at which an empirical scan found a violation")

class CutResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    flow_value: float = Field(..., ge=0.0, description="Maximum source-to-sink flow")
    side: Tuple[CutSide, ...] = Field(default=(), description="Side of every non-terminal node")

class Solution(BaseModel):
    model_config = ConfigDict(frozen=True)

    labeling: Labeling = Field(..., description="Minimizing labeling")
    powered_energy: float = Field(..., description="Sum of p-th powers on the original terms")
    lp_value: float = Field(..., description="powered_energy ** (1/p)")
    max_term: float = Field(..., description="Largest active term value")
    flow_value: float = Field(..., description="Max-flow value of the normalized, powered network")
    offset: float = Field(..., description="Constant of the reduction")
    p: float = Field(..., description="Power of the objective")

class OracleResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    min_value: float = Field(..., description="Minimum objective value")
    minimizers: Tuple[Labeling, ...] = Field(..., min_length=1, description="All labelings attaining the minimum")

# ============================================================================
# PROBLEM FILES AND REPORTS
# ============================================================================

class GridShape(BaseModel):
    width: int = Field(..., ge=1)
    height: int = Field(..., ge=1)

class ProblemFile(BaseModel):
    """On-disk representation of an energy function."""
    format: Literal["lpcut-problem"] = Field(default="lpcut-problem", description="Format tag")
    version: Literal[1] = Field(default=1, description="Format version")
    vertex_count: int = Field(..., ge=0)
    unaries: List[Tuple[NonNegativeFinite, NonNegativeFinite]] = Field(default_factory=list)
    edges: List[Tuple[int, int, Tuple[NonNegativeFinite, NonNegativeFinite, NonNegativeFinite, NonNegativeFinite]]] = Field(default_factory=list)
    grid: Optional[GridShape] = Field(None, description="Raster shape for grid instances")

    @model_validator(mode="after")
    def _check_grid(self) -> "ProblemFile":
        if self.grid is not None and self.grid.width * self.grid.height != self.vertex_count:
            raise ValueError("grid width*height does not match vertex_count")
        return self

class EdgeCertificate(BaseModel):
    edge_index: int
    i: int
    j: int
    table: Tuple[float, float, float, float]
    certificate: Certificate

class SolutionSummary(BaseModel):
    p: float
    labeling: str
    raster: Optional[List[str]] = None
    powered_energy: float
    lp_value: float
    max_term: float
    flow_value: float
    offset: float
    wall_time_s: float

class OracleSummary(BaseModel):
    objective: Literal["powered", "minimax"]
    p: Optional[float] = None
    min_value: float
    minimizers: List[str]

class Report(BaseModel):
    command: str = Field(..., description="Subcommand that produced the report")
    problem: Optional[str] = Field(None, description="Problem file path")
    vertex_count: int = 0
    edge_count: int = 0
    certificate_counts: Dict[CertificateStatus, int] = Field(default_factory=dict)
    flagged_edges: List[EdgeCertificate] = Field(default_factory=list, description="Edges not certified for all p")
    solutions: List[SolutionSummary] = Field(default_factory=list)
    max_term_non_increasing: Optional[bool] = None
    oracle: List[OracleSummary] = Field(default_factory=list)
    output_file: Optional[str] = None
    exit_code: int = 0

"""Request/response schemas for the service endpoints.

These mirror the on-disk JSON formats: circuits, representations, and
sampler programs round-trip through the core serializers unchanged.
Exact rationals travel as {num, den, decimal} triples.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal, Optional

from pydantic import BaseModel, Field


class RationalModel(BaseModel):
    num: int
    den: int
    decimal: float

    @staticmethod
    def from_fraction(value: Fraction) -> "RationalModel":
        return RationalModel(
            num=value.numerator, den=value.denominator, decimal=float(value)
        )


class GateModel(BaseModel):
    kind: Literal["matchgate", "fswap", "zrot", "xxrot"]
    qubit: int
    angle: Optional[float] = None
    A: Optional[list] = None  # 2x2 nested [re, im] pairs
    B: Optional[list] = None

    def to_core_dict(self) -> dict:
        data = {"kind": self.kind, "qubit": self.qubit}
        if self.angle is not None:
            data["angle"] = self.angle
        if self.A is not None:
            data["A"] = self.A
        if self.B is not None:
            data["B"] = self.B
        return data


class CircuitModel(BaseModel):
    num_qubits: int
    gates: list[GateModel]

    def to_core_dict(self) -> dict:
        return {"num_qubits": self.num_qubits, "gates": [g.to_core_dict() for g in self.gates]}


class RepresentationModel(BaseModel):
    w: list[float]
    theta: float


class IntegerRepresentationModel(BaseModel):
    v: list[int]
    phi: int
    weight: int


class WmsProgramModel(BaseModel):
    pi: list[float]
    c: str


class AnalyzeRequest(BaseModel):
    table: str
    n: Optional[int] = None


class WeightBoundsModel(BaseModel):
    lower: RationalModel
    upper: RationalModel


class AnalyzeResponse(BaseModel):
    table: str
    n: int
    is_ltg: bool
    margin: Optional[RationalModel] = None
    optimal_probability: Optional[RationalModel] = None
    dependent_variables: list[int]
    representation: Optional[RepresentationModel] = None
    representation_exact: Optional[list[RationalModel]] = None  # w entries then theta
    witness_input: Optional[str] = None
    weight_bounds: Optional[WeightBoundsModel] = None
    integer_representation: Optional[IntegerRepresentationModel] = None
    infeasibility: Optional[list[RationalModel]] = None


class SynthesizeRequest(BaseModel):
    table: Optional[str] = None
    n: Optional[int] = None
    representation: Optional[RepresentationModel] = None


class SynthesisMetadataModel(BaseModel):
    n: int
    margin: float
    promised_probability: float
    representation: RepresentationModel
    gate_count: int


class SynthesizeResponse(BaseModel):
    circuit: CircuitModel
    metadata: SynthesisMetadataModel
    rotation: list[list[float]]
    verified: bool
    min_probability: float


class SimulateRequest(BaseModel):
    circuit: CircuitModel
    input: str
    backend: Literal["rotation", "dense", "both"] = "rotation"


class SimulateResponse(BaseModel):
    backend: str
    p0: float
    expectation_z1: float
    dense_p0: Optional[float] = None
    dense_expectation_z1: Optional[float] = None
    discrepancy: Optional[float] = None


class WmsRunRequest(BaseModel):
    program: Optional[WmsProgramModel] = None
    representation: Optional[RepresentationModel] = None
    table: Optional[str] = None
    input: str
    samples: int = Field(default=0, ge=0)
    seed: int = 0


class WmsRunResponse(BaseModel):
    program: WmsProgramModel
    output_expectation: float
    probability_output0: float
    success_probability: Optional[float] = None
    empirical_frequency_output0: Optional[float] = None
    samples: int
    seed: int


class VerifyRequest(BaseModel):
    level: Literal["fast", "full"] = "fast"
    seed: int = 20260800


class CheckResultModel(BaseModel):
    name: str
    passed: bool
    details: dict


class VerifyResponse(BaseModel):
    level: str
    passed: bool
    checks: list[CheckResultModel]

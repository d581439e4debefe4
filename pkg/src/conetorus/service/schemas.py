"""Request and response models for the HTTP service.

Numeric payload fields accept either JSON numbers or decimal strings;
responses always carry decimal strings at full working precision and a
schema version field.
"""

from __future__ import annotations

from typing import Optional, Union

from pydantic import BaseModel, Field

Real = Union[str, float, int]


class WordRequest(BaseModel):
    word: str
    precision_bits: int = 256


class TracePolyResponse(BaseModel):
    schema_: int = Field(1, alias="schema")
    word: str
    polynomial: str
    term_count: int
    total_degree: int

    model_config = {"populate_by_name": True}


class PointPayload(BaseModel):
    schema_: int = Field(1, alias="schema")
    theta: str
    x: str
    y: str
    z: str
    precision_bits: int

    model_config = {"populate_by_name": True}


class EvalRequest(BaseModel):
    word: str
    theta: Real
    x: Real
    y: Real
    z: Optional[Real] = None
    precision_bits: int = 256


class EvalPointResult(BaseModel):
    point: PointPayload
    value: str
    abs_word_trace: str


class EvalResponse(BaseModel):
    schema_: int = Field(1, alias="schema")
    word: str
    results: list[EvalPointResult]

    model_config = {"populate_by_name": True}


class ClassifyRequest(BaseModel):
    word: str
    theta: Real
    x: Real
    y: Real
    z: Optional[Real] = None
    precision_bits: int = 256
    tol: Optional[Real] = None


class ClassifyPointResult(BaseModel):
    point: PointPayload
    kind: str
    rotation_angle: Optional[str] = None
    translation_length: Optional[str] = None
    trace: str


class ClassifyResponse(BaseModel):
    schema_: int = Field(1, alias="schema")
    word: str
    results: list[ClassifyPointResult]

    model_config = {"populate_by_name": True}


class PhiRequest(BaseModel):
    theta_a: Real
    theta_b: Real
    theta_c: Real
    precision_bits: int = 256


class PhiResponse(BaseModel):
    schema_: int = Field(1, alias="schema")
    point: PointPayload

    model_config = {"populate_by_name": True}


class PhiInvRequest(BaseModel):
    theta: Real
    x: Real
    y: Real
    z: Real
    precision_bits: int = 256


class TrianglePayload(BaseModel):
    schema_: int = Field(1, alias="schema")
    theta_a: str
    theta_b: str
    theta_c: str

    model_config = {"populate_by_name": True}


class PhiInvResponse(BaseModel):
    schema_: int = Field(1, alias="schema")
    angles: TrianglePayload
    angle_sum: str
    half_cone_angle: str

    model_config = {"populate_by_name": True}


class NewmanRequest(BaseModel):
    u: str
    r: str
    m: int


class CertificateStep(BaseModel):
    position: int
    removed: str
    inserted: str


class MembershipResponse(BaseModel):
    schema_: int = Field(1, alias="schema")
    decision: bool
    witness: Optional[dict] = None
    certificate_steps: list[CertificateStep]
    outcome: str
    stuck_word: Optional[str] = None
    states_explored: int

    model_config = {"populate_by_name": True}


class TorsionTypeRequest(BaseModel):
    u: str


class GridPayload(BaseModel):
    start: Real = "2.05"
    stop: Real = 12
    step: Real = "0.01"


class FindLocusRequest(BaseModel):
    theta: Real
    coordinate: str = "z"
    n_min: int = 1
    n_max: int = 20
    grid: GridPayload = GridPayload()
    torsion_order: Optional[str] = None  # "p/q" switches to the torsion search
    precision_bits: int = 256
    certify_samples: int = 5
    tol: Optional[Real] = None


class LocusPayload(BaseModel):
    schema_: int = Field(1, alias="schema")
    theta: str
    coordinate: str
    s: str
    N: int
    word: str
    torsion_order: Optional[str] = None
    certified: bool
    residuals: list[str]
    samples: list[dict]
    metadata: dict

    model_config = {"populate_by_name": True}


class FindLocusResponse(BaseModel):
    schema_: int = Field(1, alias="schema")
    results: list[LocusPayload]
    certified_count: int

    model_config = {"populate_by_name": True}


class LocusSpec(BaseModel):
    coordinate: str
    s: Real
    n: int
    torsion_order: Optional[str] = None


class DoublePointRequest(BaseModel):
    theta: Real
    locus1: LocusSpec
    locus2: LocusSpec
    precision_bits: int = 256
    tol: Optional[Real] = None


class DoublePointResponse(BaseModel):
    schema_: int = Field(1, alias="schema")
    point: PointPayload
    residual1: str
    residual2: str

    model_config = {"populate_by_name": True}

"""JSON documents produced by the CLI and the HTTP API."""

import json
import math
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field

from app.models.family import FamilyTag

SCHEMA_VERSION = 1
INDENT = "  "


def _encode(value: Any, depth: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad, inner = INDENT * depth, INDENT * (depth + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_encode(v, depth + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{inner}{_encode(v, depth + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(value, float):
        if not math.isfinite(value):
            return "null"
        text = format(value, ".17g")
        return text if any(c in text for c in ".e") else text + ".0"
    return json.dumps(value)


class ConditionValue(BaseModel):
    """One constant-curvature condition: the scalar that must vanish and whether it does."""

    kind: Literal["exact", "sup"]
    value: float
    tolerance: float
    passed: bool


class ConditionCheck(BaseModel):
    family: FamilyTag
    condition_values: Dict[str, ConditionValue]

    @computed_field
    @property
    def conditions_hold(self) -> bool:
        return all(c.passed for c in self.condition_values.values())


class TheoremVerdict(BaseModel):
    family: FamilyTag
    conditions_hold: bool
    condition_values: Dict[str, ConditionValue]
    numeric_K: float
    numeric_residual: float
    K_spread: float
    tol_cc: float
    tol_K: float

    @computed_field
    @property
    def numeric_constant_curvature(self) -> bool:
        return self.numeric_residual < self.tol_cc and self.K_spread < self.tol_K * max(1.0, abs(self.numeric_K))

    @computed_field
    @property
    def consistent(self) -> bool:
        return self.conditions_hold == self.numeric_constant_curvature


class PointRecord(BaseModel):
    x: List[float]
    signature: List[int]
    K: float
    residual_rel: float
    sym_residuals: Dict[str, float]
    quantities: Dict[str, float] = Field(default_factory=dict)


class Aggregate(BaseModel):
    K_mean: float
    K_spread: float
    residual_max: float
    sym_residual_max: float
    conditions: Dict[str, ConditionValue]
    verdict: TheoremVerdict


class Report(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    tool_version: str
    seed: int
    samples: int
    config: Dict[str, Any]
    points: List[PointRecord]
    aggregate: Aggregate

    def to_json(self) -> str:
        return _encode(self.model_dump(mode="json", by_alias=True))


class ComponentCheck(BaseModel):
    family: str
    index: List[int]
    predicted: float
    brute_force: float
    abs_error: float
    passed: bool


class CrosscheckPoint(BaseModel):
    x: List[float]
    components: List[ComponentCheck]
    derivative_relation: Dict[str, float] = Field(default_factory=dict)
    equalities: Dict[str, float] = Field(default_factory=dict)


class CrosscheckReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    tool_version: str
    seed: int
    config: Dict[str, Any]
    tolerance: float
    points: List[CrosscheckPoint]
    family_max_error: Dict[str, float]
    discrepant: List[str]

    @computed_field
    @property
    def passed(self) -> bool:
        return not self.discrepant

    def to_json(self) -> str:
        return _encode(self.model_dump(mode="json", by_alias=True))


class SampleReport(BaseModel):
    family: FamilyTag
    seed: int
    points: List[List[float]]
    singular_distance: List[float]

    def to_json(self) -> str:
        return _encode(self.model_dump(mode="json"))


class EisenhartReport(BaseModel):
    family: FamilyTag
    derivative: Literal["covariant", "partial"]
    points: List[List[float]]
    residuals: List[float]
    residual_max: float
    tolerance: Optional[float] = None

    @computed_field
    @property
    def passed(self) -> Optional[bool]:
        return None if self.tolerance is None else self.residual_max <= self.tolerance

    def to_json(self) -> str:
        return _encode(self.model_dump(mode="json"))

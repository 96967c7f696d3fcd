"""User-supplied Eisenhart fields: a symmetric tensor h and a scalar φ."""

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.models.funcspec import FunctionSpec


class TensorEntry(BaseModel):
    """h_ij += p(x^coord); indices 1-based. Symmetric h needs both (i, j) and (j, i)."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    i: int = Field(ge=1, le=6)
    j: int = Field(ge=1, le=6)
    coord: int = Field(ge=1, le=6)
    coeffs: List[float] = Field(min_length=1)

    @property
    def function(self) -> FunctionSpec:
        return FunctionSpec(coeffs=self.coeffs)


class HField(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    metric_scale: Optional[float] = None
    entries: List[TensorEntry] = Field(default_factory=list)


class PhiField(BaseModel):
    """φ = Σ_c p_c(x^c), keyed by 1-based coordinate."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    terms: Dict[int, FunctionSpec] = Field(default_factory=dict)

    @field_validator("terms")
    @classmethod
    def _coordinates(cls, value: Dict[int, FunctionSpec]) -> Dict[int, FunctionSpec]:
        bad = [c for c in value if not 1 <= c <= 6]
        if bad:
            raise ValueError(f"phi terms must be keyed by coordinates 1..6, got {bad}")
        return value


class EisenhartInput(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    h: HField
    phi: PhiField = Field(default_factory=PhiField)

import json
from enum import Enum
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from app.core.error_handling import ConfigInvalid, PreconditionViolation
from app.models.funcspec import FunctionSpec


class FamilyTag(str, Enum):
    T2211 = "2211"
    T321 = "321"
    T33 = "33"
    T411 = "411"
    T51 = "51"


class FamilyLayout(BaseModel):
    """Which config fields a family reads."""

    signs: Tuple[str, ...]
    functions: Tuple[str, ...]
    uses_a: bool
    uses_eps_tilde: bool


LAYOUTS: Dict[FamilyTag, FamilyLayout] = {
    FamilyTag.T2211: FamilyLayout(signs=("e2", "e4", "e5", "e6"), functions=("theta", "omega", "f5", "f6"), uses_a=True, uses_eps_tilde=True),
    FamilyTag.T321: FamilyLayout(signs=("e3", "e5", "e6"), functions=("theta", "omega", "f6"), uses_a=True, uses_eps_tilde=True),
    FamilyTag.T33: FamilyLayout(signs=("e3", "e6"), functions=("theta", "omega"), uses_a=True, uses_eps_tilde=True),
    FamilyTag.T411: FamilyLayout(signs=("e4", "e5", "e6"), functions=("theta", "f5", "f6"), uses_a=False, uses_eps_tilde=False),
    FamilyTag.T51: FamilyLayout(signs=("e5", "e6"), functions=("theta", "f6"), uses_a=False, uses_eps_tilde=False),
}

FUNCTION_FIELDS = ("theta", "omega", "f5", "f6")


class FamilyConfig(BaseModel):
    """Family tag plus every parameter of its canonical metric.

    Fields a family does not use must be absent or null; unknown keys are rejected.
    """

    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    tag: FamilyTag = Field(alias="family")
    eps: Literal[0, 1]
    eps_tilde: Optional[Literal[0, 1]] = None
    a: Optional[float] = None
    signs: Dict[str, Literal[-1, 1]]
    theta: Optional[FunctionSpec] = None
    omega: Optional[FunctionSpec] = None
    f5: Optional[FunctionSpec] = None
    f6: Optional[FunctionSpec] = None
    misprint_mode: Literal["literal", "alt"] = "literal"
    relax_constraints: bool = False

    @property
    def layout(self) -> FamilyLayout:
        return LAYOUTS[self.tag]

    def sign(self, name: str) -> int:
        return self.signs[name]

    @property
    def et(self) -> int:
        """ε̃, zero for families without it."""
        return self.eps_tilde or 0

    @property
    def a_value(self) -> float:
        return self.a or 0.0

    @model_validator(mode="after")
    def _check_family_fields(self) -> "FamilyConfig":
        layout = LAYOUTS[self.tag]
        if set(self.signs) != set(layout.signs):
            raise ValueError(f"[{self.tag.value}] expects signs {sorted(layout.signs)}, got {sorted(self.signs)}")
        for name in FUNCTION_FIELDS:
            present = getattr(self, name) is not None
            if name in layout.functions and not present:
                raise ValueError(f"[{self.tag.value}] requires function '{name}'")
            if name not in layout.functions and present:
                raise ValueError(f"[{self.tag.value}] does not use function '{name}'")
        if layout.uses_eps_tilde and self.eps_tilde is None:
            raise ValueError(f"[{self.tag.value}] requires eps_tilde")
        if not layout.uses_eps_tilde and self.eps_tilde is not None:
            raise ValueError(f"[{self.tag.value}] does not use eps_tilde")
        if layout.uses_a and self.a is None:
            raise ValueError(f"[{self.tag.value}] requires a")
        if not layout.uses_a and self.a is not None:
            raise ValueError(f"[{self.tag.value}] does not use a")
        if self.relax_constraints and self.tag is not FamilyTag.T321:
            raise ValueError("relax_constraints only applies to [321]")
        self._check_family_constraints()
        return self

    def _check_family_constraints(self) -> None:
        if self.tag in (FamilyTag.T2211, FamilyTag.T321, FamilyTag.T33):
            if self.eps_tilde == 0 and self.a == 0.0:
                raise ValueError(f"[{self.tag.value}] a must be nonzero when eps_tilde=0")
        if self.tag is FamilyTag.T321 and not self.relax_constraints:
            if self.eps == 0 and self.eps_tilde == 0:
                raise ValueError("[321] eps and eps_tilde cannot both vanish")
        if self.tag is FamilyTag.T33:
            if self.eps == 0 and self.theta.is_zero():
                raise ValueError("[33] theta must be nonzero when eps=0")
            if self.eps_tilde == 0 and self.omega.is_zero():
                raise ValueError("[33] omega must be nonzero when eps_tilde=0")


class ChartPoint(BaseModel):
    """Chart coordinates x^1..x^6."""

    model_config = ConfigDict(frozen=True)

    x: List[float] = Field(min_length=6, max_length=6)

    @field_validator("x")
    @classmethod
    def _finite(cls, value: List[float]) -> List[float]:
        if not all(np.isfinite(value)):
            raise ValueError("chart coordinates must be finite")
        return value

    def as_array(self) -> np.ndarray:
        return np.asarray(self.x, dtype=float)


PointLike = Union[ChartPoint, Sequence[float], np.ndarray]


def coords(p: PointLike) -> np.ndarray:
    x = p.as_array() if isinstance(p, ChartPoint) else np.asarray(p, dtype=float)
    if x.shape != (6,) or not np.all(np.isfinite(x)):
        raise PreconditionViolation(f"chart point must be 6 finite coordinates, got {x!r}")
    return x


def parse_family_config(data: dict) -> FamilyConfig:
    try:
        return FamilyConfig.model_validate(data)
    except ValidationError as exc:
        messages = "; ".join(f"{'.'.join(str(p) for p in e['loc']) or 'config'}: {e['msg']}" for e in exc.errors())
        raise ConfigInvalid(messages) from exc


def load_family_config(path: Union[str, Path]) -> FamilyConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigInvalid(f"config file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"{path}: invalid JSON ({exc})") from exc
    return parse_family_config(data)

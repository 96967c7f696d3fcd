"""Request bodies of the HTTP API; they mirror the CLI flags."""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.models.family import FamilyConfig
from app.models.fields import EisenhartInput


class RunRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config: FamilyConfig
    samples: int = Field(default=10, ge=1, le=1000)
    seed: int = 0
    box: Optional[str] = Field(default=None, description="LO:HI interval for every coordinate")
    misprint_mode: Optional[Literal["literal", "alt"]] = None

    def family_config(self) -> FamilyConfig:
        if self.misprint_mode is None:
            return self.config
        return self.config.model_copy(update={"misprint_mode": self.misprint_mode})


class CheckRequest(RunRequest):
    tol_cc: Optional[float] = Field(default=None, gt=0)
    tol_cond: Optional[float] = Field(default=None, gt=0)


class CrosscheckRequest(RunRequest):
    tol: Optional[float] = Field(default=None, gt=0)


class EisenhartRequest(RunRequest):
    fields: EisenhartInput
    derivative: Optional[Literal["covariant", "partial"]] = None
    tol: Optional[float] = Field(default=None, gt=0)

from typing import Dict, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.core.error_handling import IndexNotInFamily
from app.models.family import FamilyTag


class ConditionQuantities(BaseModel):
    """Closed-form scalars at one point.

    Keys are index strings: ``rho_p["2"]``, ``rho_pq["24"]``, ``rho_sigma_p["52"]``
    (σ first, then p). Only the entries a family defines are populated.
    """

    model_config = ConfigDict(frozen=True)

    family: FamilyTag
    rho_p: Dict[str, float] = Field(default_factory=dict)
    rho_pq: Dict[str, float] = Field(default_factory=dict)
    rho_sigma_p: Dict[str, float] = Field(default_factory=dict)
    B_p: Dict[str, float] = Field(default_factory=dict)
    chi_p: Dict[str, float] = Field(default_factory=dict)
    gamma: Optional[float] = None   # [321]
    gamma1: Optional[float] = None  # [411]
    gamma2: Optional[float] = None  # [411]

    def require(self, name: str, key: Optional[str] = None) -> float:
        value = getattr(self, name, None)
        if isinstance(value, dict):
            value = value.get(key) if key is not None else None
        if value is None:
            label = f"{name}[{key}]" if key is not None else name
            raise IndexNotInFamily(f"{label} is not defined for family [{self.family.value}]")
        return value

    def flat(self) -> Dict[str, float]:
        """Single-level view used in reports."""
        out: Dict[str, float] = {}
        for name in ("rho_p", "rho_pq", "rho_sigma_p", "B_p", "chi_p"):
            for key, value in getattr(self, name).items():
                out[f"{name}_{key}"] = value
        for name in ("gamma", "gamma1", "gamma2"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out

from pathlib import Path
from typing import Dict

import numpy as np

from app.models.family import FamilyConfig, load_family_config, parse_family_config

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

FLAT = ["f33_flat", "f2211_flat", "f321_flat", "f411_flat", "f51_flat"]
# fixture -> the one condition it violates
VIOLATED: Dict[str, str] = {
    "f2211_eps": "eps",
    "f321_f6": "f6_prime",
    "f33_eps": "eps",
    "f411_f5": "gamma1",
    "f51_eps": "eps",
}
GENERIC = ["f2211_generic", "f321_generic", "f33_generic", "f411_generic", "f51_eps"]
ALL = FLAT + list(VIOLATED) + ["f2211_generic", "f321_generic", "f33_generic", "f411_generic", "f411_eps"]


def load(name: str) -> FamilyConfig:
    return load_family_config(FIXTURES / f"{name}.json")


def variant(name: str, **update) -> FamilyConfig:
    """A fixture with some fields replaced, re-validated."""
    data = load(name).model_dump(by_alias=True, exclude_none=True, mode="json")
    data.update(update)
    return parse_family_config(data)


def rel_scale(*arrays: np.ndarray) -> float:
    return max([1.0] + [float(np.abs(a).max()) for a in arrays])

"""Polynomial stand-ins for the arbitrary functions θ, ω, f_5 and f_6."""

from typing import List, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from pydantic import BaseModel, ConfigDict, Field, field_validator

MAX_DEGREE = 8


class FunctionSpec(BaseModel):
    """Univariate polynomial, coefficients in ascending degree.

    Values and the first two derivatives are exact Horner evaluations, which is
    all the curvature formulas ever need (f, f', f'').
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    coeffs: List[float] = Field(default_factory=lambda: [0.0], min_length=1, max_length=MAX_DEGREE + 1)

    @field_validator("coeffs")
    @classmethod
    def _finite(cls, value: List[float]) -> List[float]:
        if not all(np.isfinite(value)):
            raise ValueError("polynomial coefficients must be finite")
        return value

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def eval2(self, t: float) -> Tuple[float, float, float]:
        c = np.asarray(self.coeffs, dtype=float)
        d1 = P.polyder(c, 1)
        d2 = P.polyder(c, 2)
        return float(P.polyval(t, c)), float(P.polyval(t, d1)), float(P.polyval(t, d2))

    def value(self, t: float) -> float:
        return float(P.polyval(t, np.asarray(self.coeffs, dtype=float)))


def eval2(f: FunctionSpec, t: float) -> Tuple[float, float, float]:
    """(f(t), f'(t), f''(t))."""
    return f.eval2(t)

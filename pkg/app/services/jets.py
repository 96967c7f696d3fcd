"""Second-order forward-mode differentiation over the six chart variables.

A ``Jet2`` carries a value with its exact gradient and Hessian. The family
metrics are assembled from seeded coordinates, so every metric entry comes out
with its first and second partials, which is exactly what the Christoffel
symbols and their derivatives consume.
"""

from typing import Optional, Union

import numpy as np

from app.core.config import settings
from app.core.error_handling import DivisionNearZero
from app.models.funcspec import FunctionSpec

DIM = 6

Number = Union[int, float]


class Jet2:
    __slots__ = ("val", "grad", "hess")
    # numpy scalars on the left must defer to the reflected operators
    __array_ufunc__ = None

    def __init__(self, val: float, grad: np.ndarray, hess: np.ndarray):
        self.val = float(val)
        self.grad = np.asarray(grad, dtype=float)
        h = np.asarray(hess, dtype=float)
        self.hess = 0.5 * (h + h.T)

    @classmethod
    def constant(cls, c: Number) -> "Jet2":
        return cls(c, np.zeros(DIM), np.zeros((DIM, DIM)))

    @classmethod
    def variable(cls, k: int, value: Number) -> "Jet2":
        """Seed coordinate x^(k+1): grad = e_k, hess = 0."""
        grad = np.zeros(DIM)
        grad[k] = 1.0
        return cls(value, grad, np.zeros((DIM, DIM)))

    @classmethod
    def lift(cls, x: Union["Jet2", Number]) -> "Jet2":
        return x if isinstance(x, Jet2) else cls.constant(x)

    def __repr__(self) -> str:
        return f"Jet2(val={self.val!r}, grad={self.grad.tolist()!r})"

    def __add__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.val + other.val, self.grad + other.grad, self.hess + other.hess)
        return Jet2(self.val + other, self.grad, self.hess)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.val, -self.grad, -self.hess)

    def __sub__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.val - other.val, self.grad - other.grad, self.hess - other.hess)
        return Jet2(self.val - other, self.grad, self.hess)

    def __rsub__(self, other):
        return Jet2(other - self.val, -self.grad, -self.hess)

    def __mul__(self, other):
        if isinstance(other, Jet2):
            return jet_mul(self, other)
        return Jet2(self.val * other, self.grad * other, self.hess * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            return jet_mul(self, jet_inv(other))
        return self * (1.0 / _guarded(other))

    def __rtruediv__(self, other):
        return jet_inv(self) * other

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise TypeError("Jet2 supports non-negative integer powers only")
        result = Jet2.constant(1.0)
        for _ in range(n):
            result = jet_mul(result, self)
        return result


def _guarded(x: float, guard: Optional[float] = None) -> float:
    guard = settings.DIVISION_GUARD if guard is None else guard
    if abs(x) < guard:
        raise DivisionNearZero(f"division by {x!r} (guard {guard:g})")
    return x


def jet_mul(a: Jet2, b: Jet2) -> Jet2:
    outer = np.outer(a.grad, b.grad)
    return Jet2(
        a.val * b.val,
        a.val * b.grad + b.val * a.grad,
        a.val * b.hess + b.val * a.hess + outer + outer.T,
    )


def jet_inv(a: Jet2, guard: Optional[float] = None) -> Jet2:
    v = _guarded(a.val, guard)
    inv = 1.0 / v
    return Jet2(
        inv,
        -a.grad * inv**2,
        -a.hess * inv**2 + 2.0 * inv**3 * np.outer(a.grad, a.grad),
    )


def jet_compose(f: FunctionSpec, a: Jet2) -> Jet2:
    """f(a) to second order (Faà di Bruno)."""
    f0, f1, f2 = f.eval2(a.val)
    return Jet2(f0, f1 * a.grad, f1 * a.hess + f2 * np.outer(a.grad, a.grad))


# Helpers shared by the metric builders, which run on jets or on plain floats.

def reciprocal(x: Union[Jet2, Number], guard: Optional[float] = None):
    if isinstance(x, Jet2):
        return jet_inv(x, guard)
    return 1.0 / _guarded(float(x), guard)


def apply(f: FunctionSpec, t: Union[Jet2, Number]):
    if isinstance(t, Jet2):
        return jet_compose(f, t)
    return f.value(t)


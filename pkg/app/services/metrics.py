"""Canonical metrics of the five rigid h-space families.

Each builder takes the six chart coordinates either as seeded ``Jet2``
variables (full first/second partials) or as plain floats (values only) and
writes the line element term by term into a ``QuadraticForm``. Indices in the
builders are 1-based to match the printed line elements.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.error_handling import ConfigInvalid, DivisionNearZero, NearSingularMetric, SingularPoint
from app.core.logging_config import get_logger
from app.models.family import FamilyConfig, FamilyTag, PointLike, coords
from app.services.jets import DIM, Jet2, apply, jet_inv, reciprocal

logger = get_logger(__name__)


class QuadraticForm:
    """g_ij dx^i dx^j collected from printed terms; symmetric by construction."""

    def __init__(self):
        self.entries: Dict[Tuple[int, int], object] = {}

    def square(self, i: int, coeff) -> None:
        self._add(i, i, coeff)

    def cross(self, i: int, j: int, coeff) -> None:
        # c dx^i dx^j contributes c/2 to both g_ij and g_ji
        self._add(min(i, j), max(i, j), 0.5 * coeff)

    def absorb(self, block: "QuadraticForm", scale) -> None:
        for (i, j), v in block.entries.items():
            self._add(i, j, scale * v)

    def _add(self, i: int, j: int, value) -> None:
        key = (i, j)
        self.entries[key] = self.entries[key] + value if key in self.entries else value

    def matrix(self) -> List[List[object]]:
        g: List[List[object]] = [[0.0] * DIM for _ in range(DIM)]
        for (i, j), v in self.entries.items():
            g[i - 1][j - 1] = v
            g[j - 1][i - 1] = v
        return g


@dataclass(frozen=True)
class FamilyScalars:
    """Division-free scalars of a family at a point."""

    roots: Tuple[object, ...]        # f_1..f_6 with multiplicity
    groups: Tuple[object, ...]       # one representative per distinct root
    A: object
    At: Optional[object]             # Ã, absent for [411] and [51]
    simple: Tuple[int, ...]          # 1-based indices σ of simple roots


@dataclass(frozen=True)
class MetricJet:
    g: List[List[Jet2]]
    roots: Tuple[float, ...] = ()

    def values(self) -> np.ndarray:
        return np.array([[e.val for e in row] for row in self.g])

    def gradients(self) -> np.ndarray:
        """[i, j, m] = ∂_m g_ij."""
        return np.array([[e.grad for e in row] for row in self.g])

    def hessians(self) -> np.ndarray:
        """[i, j, m, n] = ∂_m ∂_n g_ij."""
        return np.array([[e.hess for e in row] for row in self.g])

    @classmethod
    def from_constant(cls, matrix) -> "MetricJet":
        m = np.asarray(matrix, dtype=float)
        return cls(g=[[Jet2.constant(m[i, j]) for j in range(DIM)] for i in range(DIM)])


class SignatureCounts(NamedTuple):
    n_plus: int
    n_minus: int


def sigma_product(roots: Sequence, sigma: int):
    """Π'_i (f_i − f_σ) over i ≠ σ, counting root multiplicities."""
    result = 1.0
    for i, f in enumerate(roots, start=1):
        if i != sigma:
            result = result * (f - roots[sigma - 1])
    return result


# --- family scalars ---------------------------------------------------------

def _scalars_2211(cfg: FamilyConfig, x) -> FamilyScalars:
    f2 = cfg.eps * x[1]
    f4 = cfg.et * x[3] + cfg.a_value
    f5 = apply(cfg.f5, x[4])
    f6 = apply(cfg.f6, x[5])
    A = cfg.eps * x[0] + apply(cfg.theta, x[1])
    At = cfg.et * x[2] + apply(cfg.omega, x[3])
    return FamilyScalars((f2, f2, f4, f4, f5, f6), (f2, f4, f5, f6), A, At, (5, 6))


def _scalars_321(cfg: FamilyConfig, x) -> FamilyScalars:
    f3 = cfg.eps * x[2]
    f5 = cfg.et * x[4] + cfg.a_value
    f6 = apply(cfg.f6, x[5])
    A = cfg.eps * x[1] + apply(cfg.theta, x[2])
    At = cfg.et * x[3] + apply(cfg.omega, x[4])
    return FamilyScalars((f3, f3, f3, f5, f5, f6), (f3, f5, f6), A, At, (6,))


def _scalars_33(cfg: FamilyConfig, x) -> FamilyScalars:
    f3 = cfg.eps * x[2]
    f6 = cfg.et * x[5] + cfg.a_value
    A = cfg.eps * x[1] + apply(cfg.theta, x[2])
    # literal: ε̃x⁴ + ω(x⁶); alt mirrors A = εx² + θ(x³) onto the second block
    At = cfg.et * (x[4] if cfg.misprint_mode == "alt" else x[3]) + apply(cfg.omega, x[5])
    return FamilyScalars((f3, f3, f3, f6, f6, f6), (f3, f6), A, At, ())


def _scalars_411(cfg: FamilyConfig, x) -> FamilyScalars:
    f4 = cfg.eps * x[3]
    f5 = apply(cfg.f5, x[4])
    f6 = apply(cfg.f6, x[5])
    A = cfg.eps * x[2] + apply(cfg.theta, x[3])
    return FamilyScalars((f4, f4, f4, f4, f5, f6), (f4, f5, f6), A, None, (5, 6))


def _scalars_51(cfg: FamilyConfig, x) -> FamilyScalars:
    f5 = cfg.eps * x[4]
    f6 = apply(cfg.f6, x[5])
    A = cfg.eps * x[3] + apply(cfg.theta, x[4])
    return FamilyScalars((f5,) * 5 + (f6,), (f5, f6), A, None, (6,))


# --- line elements ----------------------------------------------------------

def _form_2211(cfg: FamilyConfig, x, s: FamilyScalars) -> QuadraticForm:
    f2, _, f4, _, f5, f6 = s.roots
    A, At = s.A, s.At
    S1 = 2 * reciprocal(f4 - f2) + reciprocal(f5 - f2) + reciprocal(f6 - f2)
    S2 = 2 * reciprocal(f2 - f4) + reciprocal(f5 - f4) + reciprocal(f6 - f4)

    form = QuadraticForm()
    block = QuadraticForm()
    block.cross(1, 2, 2 * A)
    block.square(2, -(A**2) * S1)
    form.absorb(block, cfg.sign("e2") * (f4 - f2) ** 2 * (f5 - f2) * (f6 - f2))

    block = QuadraticForm()
    block.cross(3, 4, 2 * At)
    block.square(4, -(At**2) * S2)
    form.absorb(block, cfg.sign("e4") * (f2 - f4) ** 2 * (f5 - f4) * (f6 - f4))

    for sigma in s.simple:
        form.square(sigma, cfg.sign(f"e{sigma}") * sigma_product(s.roots, sigma))
    return form


def _form_321(cfg: FamilyConfig, x, s: FamilyScalars) -> QuadraticForm:
    f3, f5, f6 = s.groups
    A, At = s.A, s.At
    ex1 = cfg.eps * x[0]
    S1 = reciprocal(f6 - f3) + 2 * reciprocal(f5 - f3)
    S2 = reciprocal(f6 - f3) ** 2 + 2 * reciprocal(f5 - f3) ** 2
    S3 = 0.5 * (S1**2 - S2)
    S4 = 3 * reciprocal(f3 - f5) + reciprocal(f6 - f5)

    form = QuadraticForm()
    block = QuadraticForm()
    block.square(2, 1.0)
    block.cross(1, 3, 4 * A)
    block.cross(2, 3, 2 * (ex1 - 2 * A * S1))
    block.square(3, ex1**2 - 4 * ex1 * A * S1 + 4 * A**2 * S3)
    form.absorb(block, cfg.sign("e3") * (f5 - f3) ** 2 * (f6 - f3))

    block = QuadraticForm()
    block.cross(4, 5, 2 * At)
    block.square(5, -S4 * At**2)
    form.absorb(block, cfg.sign("e5") * (f3 - f5) ** 3 * (f6 - f5))

    if cfg.misprint_mode == "alt":
        g66 = (f3 - f6) ** 3 * (f5 - f6) ** 2
    else:
        g66 = (f5 - f6) ** 2 * (f5 - f6) ** 3
    form.square(6, cfg.sign("e6") * g66)
    return form


def _form_33(cfg: FamilyConfig, x, s: FamilyScalars) -> QuadraticForm:
    f3, f6 = s.groups
    A, At = s.A, s.At
    ex1 = cfg.eps * x[0]
    ex4 = cfg.et * x[3]
    S1 = 3 * reciprocal(f6 - f3)
    S2 = 3 * reciprocal(f6 - f3) ** 2

    form = QuadraticForm()
    block = QuadraticForm()
    block.square(2, 1.0)
    block.cross(1, 3, 4 * A)
    block.cross(2, 3, 2 * (ex1 - 2 * A * S1))
    block.square(3, ex1**2 - 4 * ex1 * A * S1 + 4 * A**2 * S2)
    form.absorb(block, cfg.sign("e3") * (f6 - f3) ** 3)

    # (dx^6)^2 bracket closed symmetrically to the first block
    block = QuadraticForm()
    block.square(5, 1.0)
    block.cross(4, 6, 4 * At)
    block.cross(5, 6, 2 * (ex4 + 2 * At * S1))
    block.square(6, ex4**2 + 4 * ex4 * At * S1 + 4 * At**2 * S2)
    form.absorb(block, cfg.sign("e6") * (f3 - f6) ** 3)
    return form


def _form_411(cfg: FamilyConfig, x, s: FamilyScalars) -> QuadraticForm:
    f4, f5, f6 = s.groups
    A = s.A
    ex1, ex2 = cfg.eps * x[0], cfg.eps * x[1]
    S1 = reciprocal(f5 - f4) + reciprocal(f6 - f4)

    form = QuadraticForm()
    block = QuadraticForm()
    block.cross(1, 4, 6 * A)
    block.cross(2, 3, 2.0)
    block.cross(2, 4, 2 * (2 * ex2 - 3 * A * S1))
    block.square(3, -S1)
    block.cross(3, 4, 2 * (ex1 - 2 * ex2 * S1))
    block.square(4, 4 * (ex2**2 * S1 + ex1 * ex2 - 1.5 * ex1 * A * S1))
    trailing = block if cfg.misprint_mode == "alt" else form
    trailing.cross(3, 4, 3 * A)
    trailing.square(4, 12 * ex2 * A)
    form.absorb(block, cfg.sign("e4") * (f5 - f4) * (f6 - f4))

    for sigma in s.simple:
        form.square(sigma, cfg.sign(f"e{sigma}") * sigma_product(s.roots, sigma))
    return form


def _form_51(cfg: FamilyConfig, x, s: FamilyScalars) -> QuadraticForm:
    f5, f6 = s.groups
    A = s.A
    ex1, ex2, ex3 = cfg.eps * x[0], cfg.eps * x[1], cfg.eps * x[2]
    S1 = reciprocal(f6 - f5)

    form = QuadraticForm()
    block = QuadraticForm()
    block.cross(1, 5, 8 * A)
    block.cross(2, 4, 2.0)
    block.cross(2, 5, 2 * (3 * ex3 - 4 * A * S1))
    block.square(3, 1.0)
    block.cross(3, 4, -2 * S1)
    block.cross(3, 5, 2 * (2 * ex2 - 3 * ex3 * S1))
    block.cross(4, 5, 2 * (ex1 - 2 * ex2 * S1))
    block.square(5, 4 * (1.5 * ex1 * ex3 + ex2**2 - 2 * ex1 * A * S1 - 3 * ex2 * ex3 * S1))
    form.absorb(block, cfg.sign("e5") * (f6 - f5))

    form.square(6, cfg.sign("e6") * (f5 - f6) ** 5)
    return form


_FAMILIES: Dict[FamilyTag, Tuple[Callable, Callable]] = {
    FamilyTag.T2211: (_scalars_2211, _form_2211),
    FamilyTag.T321: (_scalars_321, _form_321),
    FamilyTag.T33: (_scalars_33, _form_33),
    FamilyTag.T411: (_scalars_411, _form_411),
    FamilyTag.T51: (_scalars_51, _form_51),
}


def family_scalars(cfg: FamilyConfig, x) -> FamilyScalars:
    return _FAMILIES[cfg.tag][0](cfg, x)


def _assemble(cfg: FamilyConfig, x):
    if not isinstance(cfg, FamilyConfig):
        raise ConfigInvalid(f"expected FamilyConfig, got {type(cfg).__name__}")
    scalars_fn, form_fn = _FAMILIES[cfg.tag]
    try:
        s = scalars_fn(cfg, x)
        return s, form_fn(cfg, x, s).matrix()
    except DivisionNearZero as exc:
        raise SingularPoint(f"[{cfg.tag.value}] singular point {list(map(_val, x))}: {exc}") from exc


def _val(v) -> float:
    return v.val if isinstance(v, Jet2) else float(v)


def eval_metric(cfg: FamilyConfig, p: PointLike) -> MetricJet:
    x = coords(p)
    seeds = [Jet2.variable(k, x[k]) for k in range(DIM)]
    s, g = _assemble(cfg, seeds)
    return MetricJet(
        g=[[Jet2.lift(e) for e in row] for row in g],
        roots=tuple(_val(f) for f in s.roots),
    )


def metric_values(cfg: FamilyConfig, p: PointLike) -> np.ndarray:
    """g_ij at a point without jet arithmetic."""
    x = coords(p)
    _, g = _assemble(cfg, [float(v) for v in x])
    return np.array(g, dtype=float)


def check_determinant(values: np.ndarray) -> float:
    """det g, refusing matrices whose rows are numerically dependent.

    |det g| is compared with Hadamard's bound, the product of the row norms,
    so rows of very different magnitude do not trip the guard.
    """
    bound = float(np.prod(np.linalg.norm(values, axis=1)))
    det = float(np.linalg.det(values))
    if bound == 0.0 or abs(det) <= settings.DET_RTOL * bound:
        raise NearSingularMetric(f"|det g| = {abs(det):.3e} against Hadamard bound {bound:.3e}")
    return det


def metric_inverse(m: MetricJet) -> MetricJet:
    """Jet-valued inverse by Gauss-Jordan elimination with partial pivoting."""
    check_determinant(m.values())
    a = [list(row) for row in m.g]
    inv = [[Jet2.constant(1.0 if i == j else 0.0) for j in range(DIM)] for i in range(DIM)]
    for col in range(DIM):
        pivot = max(range(col, DIM), key=lambda r: abs(a[r][col].val))
        a[col], a[pivot] = a[pivot], a[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        r = jet_inv(a[col][col])
        a[col] = [e * r for e in a[col]]
        inv[col] = [e * r for e in inv[col]]
        for row in range(DIM):
            if row == col or a[row][col].val == 0.0 and not a[row][col].grad.any() and not a[row][col].hess.any():
                continue
            factor = a[row][col]
            a[row] = [e - factor * p for e, p in zip(a[row], a[col])]
            inv[row] = [e - factor * p for e, p in zip(inv[row], inv[col])]
    sym = [[(inv[i][j] + inv[j][i]) * 0.5 for j in range(DIM)] for i in range(DIM)]
    return MetricJet(g=sym, roots=m.roots)


def signature(m: MetricJet) -> SignatureCounts:
    values = m.values()
    check_determinant(values)
    eig = np.sort(np.linalg.eigvalsh(values))[::-1]
    return SignatureCounts(int(np.sum(eig > 0)), int(np.sum(eig < 0)))


def singular_distance(cfg: FamilyConfig, p: PointLike) -> float:
    """Cheap lower-bound proxy for the distance to the family's singular locus."""
    x = [float(v) for v in coords(p)]
    s = family_scalars(cfg, x)
    critical = [abs(s.A)]
    if s.At is not None:
        critical.append(abs(s.At))
    groups = s.groups
    critical += [abs(fi - fj) for k, fi in enumerate(groups) for fj in groups[k + 1:]]
    critical += [abs(sigma_product(s.roots, sigma)) for sigma in s.simple]
    return float(min(critical))

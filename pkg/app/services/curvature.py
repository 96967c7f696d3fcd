"""Brute-force curvature: Christoffel symbols, Riemann tensor, K fit.

Convention: R^i_{jkl} = ∂_k Γ^i_{jl} − ∂_l Γ^i_{jk} + Γ^i_{mk} Γ^m_{jl} − Γ^i_{ml} Γ^m_{jk},
so that a round sphere block has K > 0 in R^i_{jkl} = K(δ^i_k g_jl − δ^i_l g_jk).
"""

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from app.core.error_handling import DegenerateFit
from app.core.logging_config import get_logger
from app.models.family import FamilyConfig, PointLike, coords
from app.services.jets import DIM
from app.services.metrics import MetricJet, eval_metric, metric_inverse

logger = get_logger(__name__)

MetricValueFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Christoffel:
    gamma: np.ndarray   # [i, j, k] = Γ^i_{jk}
    dgamma: np.ndarray  # [i, j, k, m] = ∂_m Γ^i_{jk}
    g: np.ndarray       # metric values at the point


@dataclass(frozen=True)
class RiemannTensor:
    r: np.ndarray  # [i, j, k, l] = R^i_{jkl}
    g: np.ndarray

    def lowered(self) -> np.ndarray:
        return np.einsum("im,mjkl->ijkl", self.g, self.r)

    def scale(self) -> float:
        return max(1.0, float(np.linalg.norm(self.g)), float(np.linalg.norm(self.r)))


@dataclass(frozen=True)
class KFit:
    K: float
    residual_rel: float
    n_terms: int


class SymmetryResiduals(NamedTuple):
    antisym1: float
    antisym2: float
    pairsym: float
    bianchi1: float


def _symmetrize_jk(t: np.ndarray) -> np.ndarray:
    return 0.5 * (t + np.swapaxes(t, 1, 2))


def _first_kind(dG: np.ndarray) -> np.ndarray:
    """Γ_{l,jk} = ½(∂_j g_lk + ∂_k g_lj − ∂_l g_jk) from dG[a, b, m] = ∂_m g_ab."""
    return 0.5 * (
        np.einsum("lkj->ljk", dG) + np.einsum("ljk->ljk", dG) - np.einsum("jkl->ljk", dG)
    )


def christoffel(m: MetricJet, minv: MetricJet) -> Christoffel:
    dG = m.gradients()
    ddG = m.hessians()
    ginv = minv.values()
    dginv = minv.gradients()

    first = _first_kind(dG)
    dfirst = 0.5 * (
        np.einsum("lkjm->ljkm", ddG) + np.einsum("ljkm->ljkm", ddG) - np.einsum("jklm->ljkm", ddG)
    )
    gamma = np.einsum("il,ljk->ijk", ginv, first)
    dgamma = np.einsum("ilm,ljk->ijkm", dginv, first) + np.einsum("il,ljkm->ijkm", ginv, dfirst)
    return Christoffel(
        gamma=_symmetrize_jk(gamma),
        dgamma=_symmetrize_jk(dgamma),
        g=m.values(),
    )


def riemann(c: Christoffel) -> RiemannTensor:
    # B^i_{jkl} = ∂_k Γ^i_{jl} + Γ^i_{mk} Γ^m_{jl}; R is its antisymmetric part in (k, l)
    b = np.einsum("ijlk->ijkl", c.dgamma) + np.einsum("imk,mjl->ijkl", c.gamma, c.gamma)
    return RiemannTensor(r=b - np.swapaxes(b, 2, 3), g=c.g)


def model_tensor(g: np.ndarray) -> np.ndarray:
    """S^i_{jkl} = δ^i_k g_jl − δ^i_l g_jk."""
    eye = np.eye(g.shape[0])
    return np.einsum("ik,jl->ijkl", eye, g) - np.einsum("il,jk->ijkl", eye, g)


def fit_constant_curvature(rt: RiemannTensor) -> KFit:
    s = model_tensor(rt.g)
    s_norm = float(np.linalg.norm(s))
    if s_norm == 0.0:
        raise DegenerateFit("constant-curvature model tensor vanishes")
    K = float(np.sum(rt.r * s) / s_norm**2)
    misfit = float(np.linalg.norm(rt.r - K * s))
    denom = max(1.0, float(np.linalg.norm(rt.r)), abs(K) * s_norm)
    return KFit(K=K, residual_rel=misfit / denom, n_terms=int(s.size))


def symmetry_residuals(rt: RiemannTensor) -> SymmetryResiduals:
    low = rt.lowered()
    scale = max(1.0, float(np.abs(low).max()))

    def rel(t: np.ndarray) -> float:
        return float(np.abs(t).max()) / scale

    return SymmetryResiduals(
        antisym1=rel(low + np.einsum("jikl->ijkl", low)),
        antisym2=rel(low + np.einsum("ijlk->ijkl", low)),
        pairsym=rel(low - np.einsum("klij->ijkl", low)),
        bianchi1=rel(low + np.einsum("iklj->ijkl", low) + np.einsum("iljk->ijkl", low)),
    )


def brute_force_riemann(cfg: FamilyConfig, p: PointLike) -> RiemannTensor:
    m = eval_metric(cfg, p)
    return riemann(christoffel(m, metric_inverse(m)))


# --- finite-difference oracle -------------------------------------------------

def _fd_christoffel_values(metric_value_fn: MetricValueFn, x: np.ndarray, h: float) -> np.ndarray:
    dG = np.empty((DIM, DIM, DIM))
    for m in range(DIM):
        step = np.zeros(DIM)
        step[m] = h
        dG[:, :, m] = (metric_value_fn(x + step) - metric_value_fn(x - step)) / (2.0 * h)
    ginv = np.linalg.inv(metric_value_fn(x))
    return _symmetrize_jk(np.einsum("il,ljk->ijk", ginv, _first_kind(dG)))


def finite_difference_christoffel(
    metric_value_fn: MetricValueFn,
    p: PointLike,
    h1: float = 1e-5,
    h2: float = 1e-4,
) -> Christoffel:
    """Γ and ∂Γ from nested central differences of metric values only."""
    x = coords(p)
    gamma = _fd_christoffel_values(metric_value_fn, x, h1)
    dgamma = np.empty((DIM, DIM, DIM, DIM))
    for m in range(DIM):
        step = np.zeros(DIM)
        step[m] = h2
        plus = _fd_christoffel_values(metric_value_fn, x + step, h1)
        minus = _fd_christoffel_values(metric_value_fn, x - step, h1)
        dgamma[..., m] = (plus - minus) / (2.0 * h2)
    return Christoffel(gamma=gamma, dgamma=_symmetrize_jk(dgamma), g=metric_value_fn(x))


def finite_difference_riemann(
    metric_value_fn: MetricValueFn,
    p: PointLike,
    h1: float = 1e-5,
    h2: float = 1e-4,
) -> RiemannTensor:
    return riemann(finite_difference_christoffel(metric_value_fn, p, h1, h2))

from typing import List, Literal, Optional, Sequence

import numpy as np

from app.core.config import settings
from app.core.error_handling import PreconditionViolation
from app.core.logging_config import get_logger
from app.models.family import FamilyConfig, PointLike, coords
from app.models.fields import EisenhartInput, HField, PhiField
from app.services.curvature import Christoffel, christoffel
from app.services.jets import DIM, Jet2, jet_compose
from app.services.metrics import MetricJet, eval_metric, metric_inverse

logger = get_logger(__name__)

Derivative = Literal["covariant", "partial"]


def eisenhart_residual(
    m: MetricJet,
    c: Christoffel,
    h: Sequence[Sequence[Jet2]],
    phi_grad: Sequence[float],
    derivative: Optional[Derivative] = None,
) -> float:
    """max |h_ij,k − 2 g_ij φ_k − g_ik φ_j − g_jk φ_i| over all index triples."""
    derivative = derivative or settings.EISENHART_DERIVATIVE
    H = np.array([[Jet2.lift(e).val for e in row] for row in h])
    dH = np.array([[Jet2.lift(e).grad for e in row] for row in h])  # [i, j, k] = ∂_k h_ij
    phi = np.asarray(phi_grad, dtype=float)
    if H.shape != (DIM, DIM) or phi.shape != (DIM,) or not np.all(np.isfinite(phi)):
        raise PreconditionViolation("h must be 6x6 and phi_grad 6 finite values")
    tol = 1e-12 * max(1.0, float(np.abs(H).max()), float(np.abs(dH).max()))
    if np.abs(H - H.T).max() > tol or np.abs(dH - np.swapaxes(dH, 0, 1)).max() > tol:
        raise PreconditionViolation("h must be symmetric in value and first derivatives")

    if derivative == "covariant":
        # ∇_k h_ij = ∂_k h_ij − Γ^l_{ki} h_lj − Γ^l_{kj} h_il
        nabla = dH - np.einsum("lki,lj->ijk", c.gamma, H) - np.einsum("lkj,il->ijk", c.gamma, H)
    else:
        nabla = dH

    g = m.values()
    rhs = (
        2.0 * np.einsum("ij,k->ijk", g, phi)
        + np.einsum("ik,j->ijk", g, phi)
        + np.einsum("jk,i->ijk", g, phi)
    )
    return float(np.abs(nabla - rhs).max())


def h_jets(field: HField, m: MetricJet, seeds: List[Jet2]) -> List[List[Jet2]]:
    h = [[Jet2.constant(0.0) for _ in range(DIM)] for _ in range(DIM)]
    if field.metric_scale is not None:
        h = [[e * field.metric_scale for e in row] for row in m.g]
    for entry in field.entries:
        h[entry.i - 1][entry.j - 1] = h[entry.i - 1][entry.j - 1] + jet_compose(entry.function, seeds[entry.coord - 1])
    return h


def phi_gradient(field: PhiField, x: np.ndarray) -> np.ndarray:
    grad = np.zeros(DIM)
    for coord, f in field.terms.items():
        grad[coord - 1] = f.eval2(float(x[coord - 1]))[1]
    return grad


def eisenhart_at(
    cfg: FamilyConfig,
    fields: EisenhartInput,
    p: PointLike,
    derivative: Optional[Derivative] = None,
) -> float:
    x = coords(p)
    m = eval_metric(cfg, x)
    seeds = [Jet2.variable(k, x[k]) for k in range(DIM)]
    c = christoffel(m, metric_inverse(m))
    residual = eisenhart_residual(m, c, h_jets(fields.h, m, seeds), phi_gradient(fields.phi, x), derivative)
    logger.debug(f"[{cfg.tag.value}] eisenhart residual {residual:.3e} at {x.tolist()}")
    return residual

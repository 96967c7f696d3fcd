"""Per-family constant-curvature conditions and the two-directional verification."""

from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.error_handling import EmptySample
from app.core.logging_config import get_logger
from app.models.family import ChartPoint, FamilyConfig, FamilyTag, PointLike, coords
from app.models.quantities import ConditionQuantities
from app.models.report import (
    Aggregate,
    ConditionCheck,
    ConditionValue,
    PointRecord,
    Report,
    TheoremVerdict,
)
from app.services.closedform import condition_quantities
from app.services.curvature import christoffel, fit_constant_curvature, riemann, symmetry_residuals
from app.services.metrics import eval_metric, metric_inverse, signature
from app.services.sampling import sample_points

logger = get_logger(__name__)

# (p, σ) differences ρ_p − ρ_σp and (p, q) differences ρ_p − ρ_pq per family
_RHO_SIGMA = {
    FamilyTag.T2211: ((2, 5), (2, 6), (4, 5), (4, 6)),
    FamilyTag.T411: ((4, 5), (4, 6)),
}
_RHO_PQ = {
    FamilyTag.T2211: ((2, "24"), (4, "24")),
}
_EXACT = {
    FamilyTag.T2211: ("eps", "eps_tilde"),
    FamilyTag.T321: ("eps", "eps_tilde"),
    FamilyTag.T33: ("eps", "eps_tilde"),
    FamilyTag.T411: ("eps",),
    FamilyTag.T51: ("eps",),
}
_F6_PRIME = (FamilyTag.T321, FamilyTag.T51)


def _sup(values: Sequence[float], tol: float, scale: float = 1.0) -> ConditionValue:
    value = float(max(abs(v) for v in values))
    bound = tol * scale
    return ConditionValue(kind="sup", value=value, tolerance=bound, passed=value < bound)


def check_conditions(
    cfg: FamilyConfig,
    points: Sequence[PointLike],
    tol_cond: Optional[float] = None,
    quantities: Optional[Sequence[ConditionQuantities]] = None,
) -> ConditionCheck:
    if len(points) == 0:
        raise EmptySample(f"[{cfg.tag.value}] condition check needs at least one point")
    tol = settings.TOL_COND if tol_cond is None else tol_cond
    xs = [coords(p) for p in points]

    values: Dict[str, ConditionValue] = {}
    for name in _EXACT[cfg.tag]:
        v = getattr(cfg, name)
        values[name] = ConditionValue(kind="exact", value=float(v), tolerance=0.0, passed=v == 0)

    if cfg.tag in _F6_PRIME:
        values["f6_prime"] = _sup([cfg.f6.eval2(float(x[5]))[1] for x in xs], tol)

    if cfg.tag in _RHO_SIGMA:
        qs = list(quantities) if quantities is not None else [condition_quantities(cfg, x) for x in xs]
        scale = max([1.0] + [abs(v) for q in qs for v in q.flat().values()])
        for p, s in _RHO_SIGMA.get(cfg.tag, ()):
            values[f"rho_{p}-rho_{s}{p}"] = _sup(
                [q.require("rho_p", str(p)) - q.require("rho_sigma_p", f"{s}{p}") for q in qs], tol, scale
            )
        for p, pq in _RHO_PQ.get(cfg.tag, ()):
            values[f"rho_{p}-rho_{pq}"] = _sup(
                [q.require("rho_p", str(p)) - q.require("rho_pq", pq) for q in qs], tol, scale
            )
        if cfg.tag is FamilyTag.T411:
            values["gamma1"] = _sup([q.require("gamma1") for q in qs], tol, scale)
            values["gamma2"] = _sup([q.require("gamma2") for q in qs], tol, scale)

    return ConditionCheck(family=cfg.tag, condition_values=values)


def evaluate_point(cfg: FamilyConfig, p: PointLike) -> Tuple[PointRecord, ConditionQuantities]:
    """Brute-force curvature pipeline plus closed-form quantities at one point."""
    x = coords(p)
    m = eval_metric(cfg, x)
    minv = metric_inverse(m)
    rt = riemann(christoffel(m, minv))
    fit = fit_constant_curvature(rt)
    sym = symmetry_residuals(rt)
    q = condition_quantities(cfg, x)
    if max(sym) > settings.SYMMETRY_TOL:
        logger.warning(f"[{cfg.tag.value}] Riemann identity residuals {sym._asdict()} at {x.tolist()}")
    logger.debug(f"[{cfg.tag.value}] K={fit.K:.6e} residual={fit.residual_rel:.3e} at {x.tolist()}")
    record = PointRecord(
        x=x.tolist(),
        signature=list(signature(m)),
        K=fit.K,
        residual_rel=fit.residual_rel,
        sym_residuals=sym._asdict(),
        quantities=q.flat(),
    )
    return record, q


def run_check(
    cfg: FamilyConfig,
    n: int,
    seed: int,
    box: Optional[Sequence[Tuple[float, float]]] = None,
    tol_cc: Optional[float] = None,
    tol_cond: Optional[float] = None,
    points: Optional[List[ChartPoint]] = None,
) -> Report:
    tol_cc = settings.TOL_CC if tol_cc is None else tol_cc
    logger.info(f"[{cfg.tag.value}] verifying constant-curvature conditions on {n} points, seed {seed}")
    points = points if points is not None else sample_points(cfg, n, seed, box)

    with ThreadPoolExecutor(max_workers=settings.WORKERS) as pool:
        results = list(pool.map(partial(evaluate_point, cfg), points))
    records = [r for r, _ in results]
    check = check_conditions(cfg, points, tol_cond, quantities=[q for _, q in results])

    ks = np.array([r.K for r in records])
    K_mean = float(ks.mean())
    K_spread = float(ks.max() - ks.min())
    residual_max = float(max(r.residual_rel for r in records))
    verdict = TheoremVerdict(
        family=cfg.tag,
        conditions_hold=check.conditions_hold,
        condition_values=check.condition_values,
        numeric_K=K_mean,
        numeric_residual=residual_max,
        K_spread=K_spread,
        tol_cc=tol_cc,
        tol_K=settings.TOL_K,
    )
    if not verdict.consistent:
        direction = "sufficiency" if verdict.conditions_hold else "necessity"
        logger.warning(
            f"[{cfg.tag.value}] inconsistent verdict ({direction}): conditions_hold={verdict.conditions_hold}, "
            f"residual={residual_max:.3e}, K spread={K_spread:.3e}"
        )
    logger.info(
        f"[{cfg.tag.value}] conditions_hold={verdict.conditions_hold} K={K_mean:.6e} "
        f"residual={residual_max:.3e} consistent={verdict.consistent}"
    )
    return Report(
        tool_version=settings.APP_VERSION,
        seed=seed,
        samples=len(records),
        config=cfg.model_dump(by_alias=True, exclude_none=True, mode="json"),
        points=records,
        aggregate=Aggregate(
            K_mean=K_mean,
            K_spread=K_spread,
            residual_max=residual_max,
            sym_residual_max=float(max(max(r.sym_residuals.values()) for r in records)),
            conditions=check.condition_values,
            verdict=verdict,
        ),
    )


def verify_theorem(
    cfg: FamilyConfig,
    n: int,
    seed: int,
    box: Optional[Sequence[Tuple[float, float]]] = None,
    tol_cc: Optional[float] = None,
    tol_cond: Optional[float] = None,
) -> TheoremVerdict:
    return run_check(cfg, n, seed, box, tol_cc, tol_cond).aggregate.verdict

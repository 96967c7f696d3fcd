from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.logging_config import get_logger
from app.models.family import ChartPoint, FamilyConfig, FamilyTag, PointLike, coords
from app.models.report import ComponentCheck, CrosscheckPoint, CrosscheckReport
from app.services.closedform import (
    RHO_ROOTS,
    Index,
    derivative_relation_residual,
    flatten,
    predicted_components,
)
from app.services.curvature import brute_force_riemann
from app.services.sampling import sample_points

logger = get_logger(__name__)

DERIVATIVE_RELATION_TOL = 1e-5
DERIVATIVE_RELATION = "derivative_relation"

# brute-force components that coincide (or vanish) on constant-curvature metrics; None means zero
COMPONENT_EQUALITIES: Dict[FamilyTag, Tuple[Tuple[Index, Optional[Index]], ...]] = {
    FamilyTag.T2211: (
        ((1, 1, 1, 2), (4, 1, 4, 2)),
        ((3, 3, 3, 4), (2, 3, 2, 4)),
        ((1, 1, 1, 2), (5, 1, 5, 2)),
        ((1, 1, 1, 2), (6, 1, 6, 2)),
        ((3, 3, 3, 4), (5, 3, 5, 4)),
        ((3, 3, 3, 4), (6, 3, 6, 4)),
    ),
    FamilyTag.T33: (
        ((2, 1, 2, 3), (6, 1, 6, 3)),
        ((5, 4, 5, 6), (3, 4, 3, 6)),
    ),
    FamilyTag.T411: (
        ((1, 1, 1, 4), (5, 1, 5, 4)),
        ((1, 1, 1, 4), (6, 1, 6, 4)),
        ((1, 2, 1, 4), (5, 2, 5, 4)),
        ((1, 2, 1, 4), (6, 2, 6, 4)),
        ((1, 2, 2, 4), None),
    ),
}


def _label(idx: Index) -> str:
    i, j, k, l = idx
    return f"R{i}_{j}{k}{l}"


def component_equalities(cfg: FamilyConfig, r: np.ndarray) -> Dict[str, float]:
    """|lhs − rhs| / max(1, |lhs|, |rhs|) for each component equality of the family."""
    out: Dict[str, float] = {}
    for lhs_idx, rhs_idx in COMPONENT_EQUALITIES.get(cfg.tag, ()):
        lhs = float(r[tuple(i - 1 for i in lhs_idx)])
        rhs = 0.0 if rhs_idx is None else float(r[tuple(i - 1 for i in rhs_idx)])
        name = f"{_label(lhs_idx)}={'0' if rhs_idx is None else _label(rhs_idx)}"
        out[name] = abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
    return out


def crosscheck_point(cfg: FamilyConfig, p: PointLike, tol: float) -> CrosscheckPoint:
    """Closed-form components against the brute-force tensor at one point."""
    x = coords(p)
    predicted = flatten(predicted_components(cfg, x))
    r = brute_force_riemann(cfg, x).r
    scale = max(1.0, float(np.abs(r).max()))
    checks: List[ComponentCheck] = []
    for (i, j, k, l), (family, value) in sorted(predicted.items()):
        brute = float(r[i - 1, j - 1, k - 1, l - 1])
        err = abs(value - brute)
        checks.append(
            ComponentCheck(
                family=family,
                index=[i, j, k, l],
                predicted=value,
                brute_force=brute,
                abs_error=err,
                passed=err <= tol * max(scale, abs(value)),
            )
        )
    relation = derivative_relation_residual(cfg, x) if cfg.tag in RHO_ROOTS else {}
    return CrosscheckPoint(
        x=x.tolist(),
        components=checks,
        derivative_relation=relation,
        equalities=component_equalities(cfg, r),
    )


def run_crosscheck(
    cfg: FamilyConfig,
    n: int,
    seed: int,
    box: Optional[Sequence[Tuple[float, float]]] = None,
    tol: Optional[float] = None,
    points: Optional[List[ChartPoint]] = None,
) -> CrosscheckReport:
    tol = settings.CROSSCHECK_TOL if tol is None else tol
    points = points if points is not None else sample_points(cfg, n, seed, box)
    logger.info(f"[{cfg.tag.value}] crosschecking closed-form components on {len(points)} points")
    records = [crosscheck_point(cfg, p, tol) for p in points]

    family_max: Dict[str, float] = {}
    discrepant: List[str] = []
    for rec in records:
        for c in rec.components:
            family_max[c.family] = max(family_max.get(c.family, 0.0), c.abs_error)
            if not c.passed and c.family not in discrepant:
                discrepant.append(c.family)
        if rec.derivative_relation:
            worst = max(rec.derivative_relation.values())
            family_max[DERIVATIVE_RELATION] = max(family_max.get(DERIVATIVE_RELATION, 0.0), worst)
            if worst > DERIVATIVE_RELATION_TOL and DERIVATIVE_RELATION not in discrepant:
                discrepant.append(DERIVATIVE_RELATION)

    for family in discrepant:
        logger.warning(
            f"[{cfg.tag.value}] closed-form family '{family}' disagrees with brute force "
            f"(max abs error {family_max[family]:.3e}, misprint_mode={cfg.misprint_mode})"
        )
    return CrosscheckReport(
        tool_version=settings.APP_VERSION,
        seed=seed,
        config=cfg.model_dump(by_alias=True, exclude_none=True, mode="json"),
        tolerance=tol,
        points=records,
        family_max_error=dict(sorted(family_max.items())),
        discrepant=sorted(discrepant),
    )

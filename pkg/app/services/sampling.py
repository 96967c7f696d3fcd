from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.error_handling import PreconditionViolation, SamplingExhausted, WorkbenchError
from app.core.logging_config import get_logger
from app.models.family import ChartPoint, FamilyConfig, FamilyTag
from app.services.metrics import check_determinant, metric_values, singular_distance

logger = get_logger(__name__)

Box = List[Tuple[float, float]]

BASE_INTERVAL = (0.1, 0.9)

# Offsets on 0-based coordinates that keep the root groups of each family apart.
FAMILY_SHIFTS: Dict[FamilyTag, Dict[int, float]] = {
    FamilyTag.T2211: {4: 2.0, 5: 1.8},
    FamilyTag.T321: {5: 1.6},
    FamilyTag.T33: {5: 1.0},
    FamilyTag.T411: {4: 1.0, 5: 1.6},
    FamilyTag.T51: {5: 1.0},
}


def default_box(tag: FamilyTag) -> Box:
    lo, hi = BASE_INTERVAL
    shifts = FAMILY_SHIFTS[tag]
    return [(lo + shifts.get(k, 0.0), hi + shifts.get(k, 0.0)) for k in range(6)]


def parse_box(text: str) -> Box:
    """``LO:HI`` applied to all six coordinates."""
    try:
        lo_text, hi_text = text.split(":")
        lo, hi = float(lo_text), float(hi_text)
    except ValueError as exc:
        raise PreconditionViolation(f"box must be LO:HI, got {text!r}") from exc
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise PreconditionViolation(f"box bounds must be finite with LO < HI, got {text!r}")
    return [(lo, hi)] * 6


def sample_points(
    cfg: FamilyConfig,
    n: int,
    seed: int,
    box: Optional[Sequence[Tuple[float, float]]] = None,
) -> List[ChartPoint]:
    """Seeded uniform rejection sampling away from the singular locus.

    A draw is kept only if it clears SINGULAR_MARGIN and its metric passes the
    determinant guard that metric_inverse and signature apply later.
    """
    if n < 1:
        raise PreconditionViolation(f"sample size must be >= 1, got {n}")
    bounds = np.asarray(box if box is not None else default_box(cfg.tag), dtype=float)
    if bounds.shape != (6, 2) or np.any(bounds[:, 0] >= bounds[:, 1]):
        raise PreconditionViolation("box must give six intervals with lo < hi")

    rng = np.random.default_rng(seed)
    budget = n * settings.MAX_REJECTIONS_PER_POINT
    points: List[ChartPoint] = []
    rejected = 0
    while len(points) < n:
        x = rng.uniform(bounds[:, 0], bounds[:, 1])
        try:
            accepted = singular_distance(cfg, x) >= settings.SINGULAR_MARGIN
            if accepted:
                check_determinant(metric_values(cfg, x))
        except WorkbenchError:
            accepted = False
        if accepted:
            points.append(ChartPoint(x=x.tolist()))
            continue
        rejected += 1
        if rejected >= budget:
            raise SamplingExhausted(
                f"[{cfg.tag.value}] {rejected} rejections for {len(points)}/{n} points; widen or move the box"
            )

    if rejected > len(points):
        logger.warning(f"[{cfg.tag.value}] sampler rejected {rejected} of {rejected + len(points)} draws")
    logger.debug(f"[{cfg.tag.value}] sampled {n} points with seed {seed}")
    return points

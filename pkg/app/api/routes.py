from fastapi import APIRouter

from app.core.config import settings
from app.core.logging_config import get_logger
from app.models.report import CrosscheckReport, EisenhartReport, Report, SampleReport
from app.models.requests import CheckRequest, CrosscheckRequest, EisenhartRequest, RunRequest
from app.services.crosscheck import run_crosscheck
from app.services.eisenhart import eisenhart_at
from app.services.metrics import singular_distance
from app.services.sampling import parse_box, sample_points
from app.services.verdict import run_check

logger = get_logger(__name__)

# Create router
router = APIRouter()

# Import and include health check routes
from .health import router as health_router
router.include_router(health_router, tags=["health"])


# Compute-bound handlers are plain functions so FastAPI runs them in its threadpool.

@router.post("/check", response_model=Report)
def check(body: CheckRequest):
    """Verify the constant-curvature theorem on sampled points."""
    cfg = body.family_config()
    box = parse_box(body.box) if body.box else None
    return run_check(cfg, body.samples, body.seed, box, tol_cc=body.tol_cc, tol_cond=body.tol_cond)


@router.post("/crosscheck", response_model=CrosscheckReport)
def crosscheck(body: CrosscheckRequest):
    cfg = body.family_config()
    box = parse_box(body.box) if body.box else None
    return run_crosscheck(cfg, body.samples, body.seed, box, tol=body.tol)


@router.post("/sample", response_model=SampleReport)
def sample(body: RunRequest):
    cfg = body.family_config()
    box = parse_box(body.box) if body.box else None
    points = sample_points(cfg, body.samples, body.seed, box)
    return SampleReport(
        family=cfg.tag,
        seed=body.seed,
        points=[p.x for p in points],
        singular_distance=[singular_distance(cfg, p) for p in points],
    )


@router.post("/eisenhart", response_model=EisenhartReport)
def eisenhart(body: EisenhartRequest):
    cfg = body.family_config()
    box = parse_box(body.box) if body.box else None
    derivative = body.derivative or settings.EISENHART_DERIVATIVE
    points = sample_points(cfg, body.samples, body.seed, box)
    residuals = [eisenhart_at(cfg, body.fields, p, derivative) for p in points]
    logger.info(f"[{cfg.tag.value}] eisenhart residual max {max(residuals):.3e} over {len(points)} points")
    return EisenhartReport(
        family=cfg.tag,
        derivative=derivative,
        points=[p.x for p in points],
        residuals=residuals,
        residual_max=max(residuals),
        tolerance=body.tol,
    )

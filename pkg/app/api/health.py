from datetime import datetime

from fastapi import APIRouter

from app.core.config import settings

router = APIRouter()


@router.get("/health")
async def health_check():
    """Liveness check."""
    return {
        "status": "ok",
        "timestamp": datetime.now().isoformat(),
        "environment": settings.APP_ENV,
        "version": settings.APP_VERSION,
    }

from contextlib import asynccontextmanager

from fastapi import FastAPI

from app.core.config import settings
from app.core.error_handling import register_exception_handlers
from app.core.logging_config import get_logger
from app.api import routes as api_routes

logger = get_logger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    logger.info(f"Starting {settings.APP_NAME} v{settings.APP_VERSION} ({settings.APP_ENV})")
    yield
    logger.info(f"Shutting down {settings.APP_NAME}")


def create_app() -> FastAPI:
    app = FastAPI(
        title=settings.APP_NAME,
        description="Constant-curvature verification of the rigid 6D h-space families.",
        version=settings.APP_VERSION,
        debug=settings.DEBUG,
        lifespan=lifespan,
    )
    app.include_router(api_routes.router, prefix="/api", tags=["api"])
    register_exception_handlers(app)

    @app.get("/")
    async def read_root():
        return {"message": f"{settings.APP_NAME} {settings.APP_VERSION}", "docs": "/docs"}

    return app


# This is used by ASGI servers like Uvicorn
app = create_app()

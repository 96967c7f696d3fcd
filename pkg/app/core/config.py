from pydantic_settings import BaseSettings, SettingsConfigDict
import os
from typing import Literal

class Settings(BaseSettings):
    APP_NAME: str = "hspace-curvature-bench"
    APP_VERSION: str = "1.0.0"  # Semantic versioning, echoed into reports
    APP_ENV: str = os.getenv("APP_ENV", "development")
    DEBUG: bool = False

    LOG_LEVEL: str = "INFO"
    LOG_DIR: str = "logs"  # empty string disables the rotating file handler

    # Numerical guards
    DIVISION_GUARD: float = 1e-12
    SINGULAR_MARGIN: float = 0.05
    MAX_REJECTIONS_PER_POINT: int = 10000
    DET_RTOL: float = 1e-10

    # Verification tolerances (relative)
    SYMMETRY_TOL: float = 1e-10
    TOL_CC: float = 1e-8
    TOL_COND: float = 1e-9
    TOL_K: float = 1e-9
    CROSSCHECK_TOL: float = 1e-8

    EISENHART_DERIVATIVE: Literal["covariant", "partial"] = "covariant"
    WORKERS: int = 4

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",  # Ignore extra fields in environment variables
    )

settings = Settings()

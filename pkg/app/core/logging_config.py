import logging
import os
import sys
from logging.handlers import RotatingFileHandler

from .config import settings

# Define log format
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(module)s:%(funcName)s:%(lineno)d - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# Package logger; every module logger is a child of it. Console output goes to
# stderr so CLI reports on stdout stay clean.
logger = logging.getLogger("app")
logger.setLevel(settings.LOG_LEVEL.upper())

if not logger.handlers:
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
    logger.addHandler(console_handler)

    # File handler, skipped when LOG_DIR is empty
    if settings.LOG_DIR:
        os.makedirs(settings.LOG_DIR, exist_ok=True)
        file_handler = RotatingFileHandler(
            os.path.join(settings.LOG_DIR, "app.log"),
            maxBytes=1024 * 1024 * 5,
            backupCount=5,
            encoding="utf-8",
        )  # 5MB per file, 5 backup files
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
        logger.addHandler(file_handler)

def get_logger(name: str) -> logging.Logger:
    """Returns a logger instance with the specified name, inheriting base config."""
    return logging.getLogger(name)

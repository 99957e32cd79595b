"""
Package logger: console plus a rotating file, both driven by config.

Level, rotation size and backup count come from LOG_LEVEL, LOG_MAX_BYTES and
LOG_BACKUP_COUNT, so a .env file can quiet long sweeps or keep more history.
"""

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional, Union

from .. import config

LOGGER_NAME = "localizability_sim"
LOG_FORMAT = "%(asctime)s - %(levelname)s - [%(name)s:%(lineno)d] - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def configure_logger(
    level: Union[str, int] = config.LOG_LEVEL,
    log_path: Optional[Path] = None,
    max_bytes: int = config.LOG_MAX_BYTES,
    backup_count: int = config.LOG_BACKUP_COUNT,
) -> logging.Logger:
    """(Re)attaches the console and rotating-file handlers to the package logger."""
    log_path = Path(log_path or config.LOG_FILE_PATH)
    log_path.parent.mkdir(parents=True, exist_ok=True)
    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    console = logging.StreamHandler(sys.stdout)
    console.setFormatter(formatter)
    rotating = RotatingFileHandler(filename=log_path, maxBytes=max_bytes, backupCount=backup_count)
    rotating.setFormatter(formatter)

    log = logging.getLogger(LOGGER_NAME)
    for handler in list(log.handlers):
        log.removeHandler(handler)
        handler.close()
    log.setLevel(level)
    log.addHandler(console)
    log.addHandler(rotating)
    return log


logger = configure_logger()

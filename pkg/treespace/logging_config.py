# treespace/logging_config.py

import logging
from typing import Optional

from .settings import settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Optional[str] = None) -> logging.Logger:
    logger = logging.getLogger("treespace")
    logger.setLevel((level or settings.log_level).upper())
    if not any(getattr(h, "_treespace", False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._treespace = True
        logger.addHandler(handler)
    return logger

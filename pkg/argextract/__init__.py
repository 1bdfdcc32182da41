"""Toolkit factory."""
import logging
import os
from logging.handlers import RotatingFileHandler

from argextract.config import Config, set_config

LOG_FORMAT = "%(asctime)s %(levelname)s: %(message)s [in %(pathname)s:%(lineno)d]"


def create_toolkit(config_name: str | None = None) -> Config:
    """Activate configuration and configure logging.

    Args:
        config_name: Configuration name (development, production, testing)

    Returns:
        The active configuration instance
    """
    config = set_config(config_name)
    logger = logging.getLogger("argextract")
    logger.setLevel(getattr(logging, config.LOG_LEVEL))

    # Handlers are attached once per process
    if getattr(logger, "_argextract_configured", False):
        return config

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    console_handler.setLevel(logging.WARNING)
    logger.addHandler(console_handler)

    if not config.DEBUG and not config.TESTING:
        log_dir = os.path.dirname(config.LOG_FILE)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir, exist_ok=True)

        file_handler = RotatingFileHandler(
            config.LOG_FILE,
            maxBytes=10240000,  # 10MB
            backupCount=10,
        )
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        file_handler.setLevel(getattr(logging, config.LOG_LEVEL))
        logger.addHandler(file_handler)
        logger.info(f"{config.APP_NAME} {config.APP_VERSION} startup")

    logger._argextract_configured = True  # type: ignore[attr-defined]
    return config

"""Logger factory shared by every module of the package."""
import logging
import sys

from app.config import Config

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def setup_logger(name, level=None):
    """Return a logger writing to stderr with the package format.

    Args:
        name (str): Logger name, usually ``__name__``.
        level (str | int): Optional level; defaults to ``Config.LOG_LEVEL``.
    Returns:
        logging.Logger: The configured logger.
    """
    logger = logging.getLogger(name)
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
        logger.propagate = False
    logger.setLevel(level or Config.LOG_LEVEL)
    return logger

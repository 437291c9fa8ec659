"""
Configuration du logging applicatif.
"""

import logging

from src.config.settings import settings

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def configure_logging(level: str | None = None) -> None:
    """Installe le handler racine du package `src` (idempotent)."""
    root = logging.getLogger("src")
    root.setLevel(level or settings.LOG_LEVEL)
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
    root.propagate = False

"""
Logging setup - structured JSON lines on stderr
stdout is reserved for command results.
"""

import logging
import sys
from typing import Optional

from pythonjsonlogger.json import JsonFormatter

from config.settings import LOG_FORMAT, LOG_LEVEL

_HANDLER_NAME = "foldlab-stderr"


def configure_logging(level: Optional[str] = None, fmt: Optional[str] = None) -> logging.Handler:
    """
    Install (or replace) the foldlab stderr handler on the root logger

    Args:
        level: Logging level name (defaults to LOG_LEVEL)
        fmt: "json" or "text" (defaults to LOG_FORMAT)

    Returns:
        The installed handler
    """
    level = (level or LOG_LEVEL).upper()
    fmt = fmt or LOG_FORMAT

    root = logging.getLogger()
    for handler in list(root.handlers):
        if handler.get_name() == _HANDLER_NAME:
            root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.set_name(_HANDLER_NAME)
    if fmt == "json":
        handler.setFormatter(JsonFormatter("%(asctime)s %(levelname)s %(name)s %(message)s"))
    else:
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s [%(name)s] %(message)s"))
    root.addHandler(handler)
    root.setLevel(getattr(logging, level, logging.WARNING))
    return handler


__all__ = ["configure_logging"]

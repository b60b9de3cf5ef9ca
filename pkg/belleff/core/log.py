# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Logger setup. All modules log through children of the ``belleff`` logger."""

from __future__ import annotations

import logging
import sys
from typing import TextIO

LOGGER_NAME = "belleff"
VERBOSITY_LEVELS = ("debug", "info", "warning", "error")


def get_logger(child: str | None = None) -> logging.Logger:
    """Return the package logger, or one of its children."""
    log = logging.getLogger(LOGGER_NAME)
    return log.getChild(child) if child else log


def configure_logging(verbosity: str = "warning", stream: TextIO | None = None) -> logging.Logger:
    """Attach a single formatted handler to the package logger and set its level.

    Calling this more than once only changes the level.
    """
    if verbosity not in VERBOSITY_LEVELS:
        raise ValueError(f"Unknown verbosity {verbosity!r}; expected one of {VERBOSITY_LEVELS}")
    log = get_logger()
    if not any(getattr(h, "_belleff_handler", False) for h in log.handlers):
        handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
        handler.setLevel(logging.DEBUG)
        handler.setFormatter(
            logging.Formatter("%(asctime)s - %(name)-20s - %(levelname)s - %(message)s")
        )
        handler._belleff_handler = True  # type: ignore[attr-defined]
        log.addHandler(handler)
    log.setLevel(getattr(logging, verbosity.upper()))
    log.propagate = False
    return log

# crweier/verbosity.py
"""
Logging setup for the verification toolkit.

Levels:
  0  (default)  warnings only; the CLI prints its own summary lines
  1  (-v)       INFO: suites started, sample counts, pass/fail per suite
  2  (-vv)      DEBUG: per-sample tracing, tagged ``[chart#index]``
"""
from __future__ import annotations

import logging
import sys
from typing import Any, MutableMapping, Tuple

ROOT = "crweier"

_HANDLER: logging.Handler | None = None


def level_for(verbosity: int) -> int:
    if verbosity <= 0:
        return logging.WARNING
    if verbosity == 1:
        return logging.INFO
    return logging.DEBUG


def setup_logging(verbosity: int = 0) -> None:
    """Configure the ``crweier`` logger tree; later calls only change the level and format."""
    global _HANDLER
    root = logging.getLogger(ROOT)
    if _HANDLER is None:
        _HANDLER = logging.StreamHandler(sys.stderr)
        root.addHandler(_HANDLER)
        root.propagate = False

    fmt = "[%(levelname)s] %(name)s: %(message)s"
    if verbosity >= 2:
        fmt = "[%(levelname)s] %(name)s (%(filename)s:%(lineno)d): %(message)s"
    _HANDLER.setFormatter(logging.Formatter(fmt))
    root.setLevel(level_for(verbosity))


def get_logger(name: str) -> logging.Logger:
    """Return a child logger under the ``crweier`` namespace."""
    if name != ROOT and not name.startswith(ROOT + "."):
        name = f"{ROOT}.{name}"
    return logging.getLogger(name)


class SampleLogger(logging.LoggerAdapter):
    """Prefixes records with the chart and sample index they concern."""

    def process(self, msg: Any, kwargs: MutableMapping[str, Any]) -> Tuple[Any, MutableMapping[str, Any]]:
        return f"[{self.extra['chart']}#{self.extra['index']}] {msg}", kwargs


def sample_logger(logger: logging.Logger, chart: str, index: int) -> SampleLogger:
    return SampleLogger(logger, {"chart": chart, "index": index})

"""Colored, run-aware log formatting for the ``clinrisk`` logger hierarchy."""

import logging
import os
from contextvars import ContextVar
from typing import Optional, Union

#: ANSI foreground codes; backgrounds are the same code plus 10.
SGR_COLORS = {
    "GRAY": 90,
    "RED": 91,
    "GREEN": 92,
    "YELLOW": 93,
    "BLUE": 94,
    "MAGENTA": 95,
    "CYAN": 96,
    "DARK_GREEN": 32,
    "DARK_YELLOW": 33,
    "DARK_BLUE": 34,
    "DARK_MAGENTA": 35,
    "DARK_CYAN": 36,
}
LEVEL_COLORS = {"WARNING": "YELLOW", "ERROR": "RED", "CRITICAL": "RED"}
RUN_PALETTE = (
    "DARK_CYAN",
    "GREEN",
    "DARK_BLUE",
    "MAGENTA",
    "CYAN",
    "DARK_GREEN",
    "BLUE",
    "DARK_MAGENTA",
)
BANNER_PREFIX = "=== "

#: Run tag and epoch of the training run active in this thread/process.
run_context: ContextVar[Optional[tuple[str, int]]] = ContextVar("run_context", default=None)


def set_run_context(run_tag: Optional[str], epoch: int = 0) -> None:
    """Mark log records emitted from now on as belonging to ``run_tag`` at ``epoch``."""
    run_context.set(None if run_tag is None else (run_tag, epoch))


def style_string(
    string: str,
    no_format: bool = False,
    color: Optional[str] = None,
    background_color: Optional[str] = None,
    bold: bool = False,
    emph: bool = False,
) -> str:
    """Wrap ``string`` in an ANSI select-graphic-rendition sequence."""
    codes = []
    if color is not None:
        codes.append(SGR_COLORS[color.upper()])
    if background_color is not None:
        codes.append(SGR_COLORS[background_color.upper()] + 10)
    if bold:
        codes.append(1)
    if emph:
        codes.append(3)
    if no_format or not codes:
        return string
    return f"\x1b[{';'.join(map(str, codes))}m{string}\x1b[0m"


class RunFormatter(logging.Formatter):
    """Timestamp, module, level, epoch stamp and run tag, optionally colored.

    Each run tag keeps the palette color it was first seen with, so interleaved
    matrix cells stay distinguishable in one log.
    """

    def __init__(self, color_output: bool = True) -> None:
        super().__init__()
        self.color_output = color_output
        self.run_colors: dict[str, str] = {}

    def _run_color(self, run_tag: Optional[str]) -> Optional[str]:
        if run_tag is None:
            return None
        if run_tag not in self.run_colors:
            self.run_colors[run_tag] = RUN_PALETTE[len(self.run_colors) % len(RUN_PALETTE)]
        return self.run_colors[run_tag]

    def format(self, record: logging.LogRecord) -> str:
        plain = not self.color_output
        run_tag = getattr(record, "run_tag", None)
        run_color = self._run_color(run_tag)
        level_color = LEVEL_COLORS.get(record.levelname)
        critical = record.levelname == "CRITICAL"
        record.shortname = record.name.partition(".")[2] or record.name

        parts = [
            style_string("%(asctime)s ", plain, color="GRAY", emph=True),
            style_string("%(shortname)-24s ", plain, color=run_color),
            style_string("%(levelname)-10s ", plain, color=level_color, bold=critical),
        ]
        if hasattr(record, "epoch"):
            parts.append(style_string("<ep %(epoch)3d> ", plain, color="DARK_YELLOW"))
        if run_tag is not None:
            parts.append(style_string(f"{run_tag}: ", plain, color=run_color))
        if str(record.msg).startswith(BANNER_PREFIX):
            parts.append(style_string("%(message)s", plain, color="YELLOW", bold=True))
        else:
            parts.append(style_string("%(message)s", plain, color=level_color, bold=critical))

        self._style = logging.PercentStyle("".join(parts))
        self._fmt = self._style._fmt
        return super().format(record)


class ContextFilter(logging.Filter):
    """Attach the active run context and keep records of the owning process only."""

    def __init__(self, proc_id: int) -> None:
        super().__init__()
        self.proc_id = proc_id

    def filter(self, record: logging.LogRecord) -> bool:
        context = run_context.get()
        if context is not None:
            record.run_tag, record.epoch = context
        return record.process == self.proc_id


def _owned_handlers(logger: logging.Logger) -> list[logging.Handler]:
    pid = os.getpid()
    return [
        h
        for h in logger.handlers
        if any(isinstance(f, ContextFilter) and f.proc_id == pid for f in h.filters)
    ]


def _handler(handler: logging.Handler, color_output: bool) -> logging.Handler:
    handler.setFormatter(RunFormatter(color_output=color_output))
    handler.addFilter(ContextFilter(os.getpid()))
    return handler


def configure_logging(
    log_level: Union[int, str] = logging.WARNING, log_file: Optional[str] = None
) -> logging.Logger:
    """Install the clinrisk console (and optional file) handlers for this process.

    Handlers installed earlier by the same process are replaced.

    Args:
        log_level: Level for the ``clinrisk`` logger hierarchy.
        log_file: Path to additionally write uncolored logs to.

    Returns:
        The configured ``clinrisk`` logger.
    """
    logger = logging.getLogger("clinrisk")
    logger.setLevel(log_level.upper() if isinstance(log_level, str) else log_level)

    stale = _owned_handlers(logger)
    for handler in stale:
        logger.removeHandler(handler)
        handler.close()

    logger.addHandler(_handler(logging.StreamHandler(), color_output=True))
    if stale:
        logger.warning(f"Replacing clinrisk log handlers on PID={os.getpid()}")
    if log_file is not None:
        logger.addHandler(_handler(logging.FileHandler(log_file), color_output=False))
    return logger


__doc_title__ = "Logging"
__all__ = ["RunFormatter", "ContextFilter", "set_run_context", "configure_logging"]

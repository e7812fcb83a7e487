"""JSONL persistence of run results."""

import json
import logging
import os
from pathlib import Path
from typing import Iterable, Union

from clinrisk.harness.runner import SCHEMA_VERSION, RunResult

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]


class ResultsFormatError(ValueError):
    """Raised when a results file cannot be decoded; names the offending line."""

    def __init__(self, path: PathLike, line_number: int, reason: str) -> None:
        super().__init__(f"{path}, line {line_number}: {reason}")
        self.path = path
        self.line_number = line_number


def dumps_result(result: RunResult, include_wall_clock: bool = True) -> str:
    """One result as a canonical JSON line (sorted keys, no trailing newline)."""
    return json.dumps(
        result.to_dict(include_wall_clock=include_wall_clock),
        sort_keys=True,
        separators=(",", ":"),
        allow_nan=False,
    )


def persist(
    results: Iterable[RunResult], path: PathLike, include_wall_clock: bool = True
) -> int:
    """Write results as JSONL, one result per line.

    Args:
        results: Results to write, in order.
        path: Destination file, overwritten.
        include_wall_clock: Write run durations; disable for byte-comparable files.

    Returns:
        Number of lines written.
    """
    path = Path(path)
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for result in results:
            f.write(dumps_result(result, include_wall_clock) + "\n")
            count += 1
    logger.info(f"Wrote {count} results to {path}")
    return count


def load(path: PathLike) -> list[RunResult]:
    """Read a JSONL results file.

    Blank lines are skipped.

    Raises:
        ResultsFormatError: Undecodable line, schema version mismatch or missing
            fields, naming the 1-based line number.
        OSError: The file cannot be read.
    """
    path = Path(path)
    results = []
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as e:
                raise ResultsFormatError(path, line_number, f"invalid JSON ({e.msg})") from e
            if not isinstance(data, dict):
                raise ResultsFormatError(path, line_number, "expected a JSON object")
            version = data.get("schema_version")
            if version != SCHEMA_VERSION:
                raise ResultsFormatError(
                    path,
                    line_number,
                    f"schema version {version!r} does not match {SCHEMA_VERSION}",
                )
            try:
                results.append(RunResult.from_dict(data))
            except (KeyError, TypeError, ValueError) as e:
                raise ResultsFormatError(path, line_number, f"malformed result: {e}") from e
    logger.debug(f"Loaded {len(results)} results from {path}")
    return results


__doc_title__ = "Result Store"
__all__ = ["ResultsFormatError", "dumps_result", "persist", "load"]

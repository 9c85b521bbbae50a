"""
CStar - Formatting Utilities

This module provides utilities for formatting diagnostics and run summaries.
"""

from typing import List, Optional, Sequence

from cstar.proofrt.runtime import RunReport


def format_location(file: Optional[str], line: Optional[int]) -> str:
    """Format a source location as `file:line`.

    Args:
        file (str, optional): The source file
        line (int, optional): The line number

    Returns:
        str: The formatted location, or an empty string when nothing is known
    """
    if file and line:
        return f"{file}:{line}"
    if file:
        return file
    if line:
        return f"line {line}"
    return ""


def format_table(headers: List[str], rows: Sequence[Sequence[str]]) -> str:
    """Format data as a plain-text table with aligned columns.

    Args:
        headers (list): The table headers
        rows (list): The table rows

    Returns:
        str: The formatted table
    """
    if not headers:
        return ""

    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))

    def line(cells: Sequence[str]) -> str:
        return "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(cells)).rstrip()

    result = [line(headers), line(["-" * w for w in widths])]
    result.extend(line(row) for row in rows)
    return "\n".join(result)


def truncate_text(text: str, max_length: int = 100, ellipsis: str = "...") -> str:
    """Truncate text to a maximum length.

    Args:
        text (str): The text to truncate
        max_length (int, optional): The maximum length
        ellipsis (str, optional): The ellipsis to append

    Returns:
        str: The truncated text
    """
    if len(text) <= max_length:
        return text

    return text[: max_length - len(ellipsis)] + ellipsis


def format_duration(seconds: float) -> str:
    """Formats a duration in seconds as `1m 5s`, or `0.42s` below one second."""
    if seconds < 0:
        return "0s"
    if seconds < 1:
        return f"{seconds:.2f}s"

    total_seconds = int(seconds)
    minutes = total_seconds // 60
    secs = total_seconds % 60

    parts = []
    if minutes > 0:
        parts.append(f"{minutes}m")
    if secs > 0 or not parts:
        parts.append(f"{secs}s")

    return " ".join(parts)


def format_summary(report: RunReport, source: str, elapsed: Optional[float] = None) -> str:
    """Per-function summary of a run followed by the verdict line.

    Args:
        report (RunReport): The finished run
        source (str): The verified file
        elapsed (float, optional): Wall-clock time of the run in seconds

    Returns:
        str: The summary text
    """
    headers = ["function", "segments", "proof blocks", "VCs", "auto", "proved"]
    rows = [
        [f.name, str(f.segments), str(f.proof_blocks), str(f.vcs), str(f.auto_discharged), str(f.proved)]
        for f in report.functions
    ]
    lines = [format_table(headers, rows)] if rows else []

    remaining = report.undischarged
    if report.success:
        verdict = f"{source}: verified"
    elif remaining:
        verdict = f"{source}: {len(remaining)} of {len(report.vcs)} VCs undischarged"
    else:
        verdict = f"{source}: failed"
    if elapsed is not None:
        verdict += f" ({format_duration(elapsed)})"
    lines.append(verdict)
    return "\n".join(lines)

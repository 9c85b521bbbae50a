"""
CStar - Report Output Utilities

JSON dumps of a verification run (symbolic states, verification conditions,
trust report) and the residual proof skeleton. Output is deterministic:
no timestamps, keys in a fixed order.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from cstar.proofrt.runtime import RunReport

logger = logging.getLogger(__name__)

STDOUT = "-"


def build_dump(
    report: RunReport,
    states: bool = False,
    vcs: bool = False,
    trust: bool = False,
    full: bool = False,
) -> Dict[str, Any]:
    """Collect the requested parts of a run into one JSON-ready dictionary.

    Args:
        report (RunReport): The run to dump
        states (bool): Include the symbolic state at every program point
        vcs (bool): Include the verification conditions
        trust (bool): Include the trust report
        full (bool): Include verdict, per-function counters and errors as well

    Returns:
        Dict[str, Any]: The dump
    """
    dump: Dict[str, Any] = report.to_dict() if full else {}
    if not full and vcs:
        dump["vcs"] = [dict(vc.to_dict(), proved=vc.id in report.proved) for vc in report.vcs]
    if not full and trust:
        dump["trust"] = report.trust.to_dict()
    if states:
        dump["states"] = list(report.states)
    return dump


def write_json(data: Dict[str, Any], destination: Optional[str] = STDOUT) -> None:
    """Write data as indented JSON to a file, or to standard output for `-`.

    Args:
        data (dict): The JSON-ready data
        destination (str, optional): A file path, or `-` for standard output
    """
    text = json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    if destination in (None, STDOUT):
        sys.stdout.write(text)
        return
    path = Path(destination)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"wrote JSON report to {path}")


def write_residual(text: str, destination: str) -> None:
    """Save a residual proof skeleton.

    Args:
        text (str): The skeleton produced by emit_residual
        destination (str): Output file path
    """
    path = Path(destination)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"wrote residual proof skeleton to {path}")

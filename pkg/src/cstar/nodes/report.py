"""
CStar - Report Node

Last stage: residual proof skeleton, JSON dumps, and the run summary.
"""

import logging
import sys
import time

from cstar.nodes.node import Node
from cstar.proofrt.residual import emit_residual
from cstar.quote.printer import print_term
from cstar.utils.constants import EXIT_FAILURE, EXIT_VERIFIED
from cstar.utils.formatting import format_location, format_summary, truncate_text
from cstar.utils.report_writer import build_dump, write_json, write_residual

logger = logging.getLogger(__name__)


class ReportNode(Node):
    """Node writing the requested outputs and deciding the exit code."""

    def process(self, context):
        """Write dumps and the summary of the run.

        Args:
            context (dict): The shared context dictionary containing:
                - report: The run report
                - path: The verified file
                - emit_residual: Where to write the residual skeleton, or None
                - json: Destination of the full JSON report, or None
                - dump_states, dump_vcs, trust_report: Dumps for standard output
                - started_at: Start time of the run, for the summary

        Returns:
            dict: The process exit code under "exit_code"
        """
        report = context["report"]
        path = context["path"]

        if context.get("emit_residual"):
            write_residual(emit_residual(report.vcs, source=path), context["emit_residual"])

        for vc in report.undischarged:
            where = format_location(vc.file, vc.line)
            logger.warning(
                f"{vc.id} ({vc.kind}) in {vc.function} at {where} is undischarged: "
                f"{truncate_text(print_term(vc.goal), 200)}"
            )

        states = context.get("dump_states", False)
        if context.get("json"):
            write_json(build_dump(report, states=states, full=True), context["json"])
        elif states or context.get("dump_vcs") or context.get("trust_report"):
            write_json(build_dump(report, states=states, vcs=context.get("dump_vcs", False),
                                  trust=context.get("trust_report", False)))

        if not context.get("json"):
            started = context.get("started_at")
            elapsed = time.time() - started if started is not None else None
            print(format_summary(report, path, elapsed), file=sys.stderr)

        return {"exit_code": EXIT_VERIFIED if report.success else EXIT_FAILURE}

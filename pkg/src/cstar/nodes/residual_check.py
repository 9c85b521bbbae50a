"""
CStar - Residual Check Node

Third stage: runs the residual proof file given with `--proofs` against the
verification conditions left by operational checking.
"""

import logging

from cstar.nodes.node import Node
from cstar.proofrt.residual import ResidualChecker

logger = logging.getLogger(__name__)


class ResidualCheckNode(Node):
    """Node discharging VCs with the user's residual proofs."""

    def process(self, context):
        """Run the residual proof file, if any, and record the proved VCs.

        Args:
            context (dict): The shared context dictionary containing:
                - proofs: Path of the residual proof file, or None
                - runtime: The runtime of the operational stage
                - report: The run report
                - expanded: The expanded input, whose headers are not included again
                - include_dirs: Extra include directories

        Returns:
            None: The report in the context is updated in place
        """
        proofs = context.get("proofs")
        report = context["report"]
        if not proofs:
            if report.vcs:
                logger.info(f"no residual proof file; {len(report.vcs)} VCs remain")
            return None

        expanded = context["expanded"]
        checker = ResidualChecker(context["runtime"])
        proved = checker.check(
            proofs,
            report.vcs,
            include_dirs=context.get("include_dirs", []),
            already_included=[context["path"]] + list(expanded.files),
        )
        report.mark_proved(proved)
        return None

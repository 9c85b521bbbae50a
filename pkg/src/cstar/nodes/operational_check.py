"""
CStar - Operational Check Node

Second stage: runs the operational proof program, feeding each function's
segments to the symbolic engine and running its proof blocks in between.
"""

import logging

from cstar.nodes.node import Node
from cstar.proofrt.runtime import ProofRuntime

logger = logging.getLogger(__name__)


class OperationalCheckNode(Node):
    """Node running global proof blocks, then one driver per function."""

    def process(self, context):
        """Interleave symbolic execution with the program's proof blocks.

        The runtime is stored in the context before running so that states
        reached before an error can still be dumped.

        Args:
            context (dict): The shared context dictionary containing:
                - registry: Registry from the translate stage
                - proof_program: The operational proof program
                - oracle: The arithmetic oracle

        Returns:
            dict: The run report under "report"
        """
        proof_program = context["proof_program"]
        runtime = ProofRuntime(context["registry"], proof_program, context.get("oracle"))
        context["runtime"] = runtime

        progress_manager = context.get("progress_manager")
        pbar = None
        if progress_manager:
            pbar = progress_manager.get_task_pbar(
                "functions", len(proof_program.drivers), desc="    functions", unit="fn"
            )

        def on_function(name: str) -> None:
            logger.debug(f"verified {name} operationally")
            if pbar is not None:
                pbar.update(1)

        try:
            report = runtime.run(on_function=on_function)
        finally:
            if progress_manager:
                progress_manager.close_task_pbar("functions")

        logger.info(
            f"operational checking done: {len(report.functions)} functions, {len(report.vcs)} VCs"
        )
        return {"report": report}

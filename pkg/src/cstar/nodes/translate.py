"""
CStar - Translate Node

First stage of the workflow: include expansion, parsing, and assembly of
the operational proof program. Also sets up the logical context (registry,
separation-logic theory, arithmetic oracle) the later stages share.
"""

import logging

from cstar.cfront import Preprocessor, assemble_operational_program, parse_program
from cstar.kernel.registry import Registry
from cstar.nodes.node import Node
from cstar.seplogic.arith import configure_oracle
from cstar.seplogic.theory import register_theory
from cstar.utils.constants import DEFAULT_CACHE_DIR

logger = logging.getLogger(__name__)


class TranslateNode(Node):
    """Node turning a source file into an operational proof program."""

    def process(self, context):
        """Expand, parse and slice the input file.

        Args:
            context (dict): The shared context dictionary containing:
                - path: The file to verify
                - include_dirs: Extra include directories
                - prelude: Whether cstarlib.h is included implicitly
                - cache_enabled: Whether arith verdicts are cached on disk
                - cache_dir: Directory of the verdict cache

        Returns:
            dict: The expanded source, the parsed program, the operational
                proof program, the registry and the oracle
        """
        path = context["path"]
        registry = Registry()
        register_theory(registry)
        oracle = configure_oracle(
            registry,
            cache_enabled=context.get("cache_enabled", False),
            cache_dir=context.get("cache_dir") or DEFAULT_CACHE_DIR,
        )

        preprocessor = Preprocessor(context.get("include_dirs", []), prelude=context.get("prelude", True))
        expanded = preprocessor.expand_file(path)
        program = parse_program(expanded.text, path, expanded)
        proof_program = assemble_operational_program(program)

        progress_manager = context.get("progress_manager")
        if progress_manager:
            progress_manager.update_node_progress(100)

        logger.info(
            f"translated {path}: {len(program.functions)} functions, "
            f"{len(expanded.files)} included files"
        )
        return {
            "registry": registry,
            "oracle": oracle,
            "expanded": expanded,
            "program": program,
            "proof_program": proof_program,
        }

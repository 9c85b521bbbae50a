"""
CStar - Base Node

This module contains the base Node class for the verification workflow.
"""

from typing import Any, Dict, Optional


class Node:
    """Base class for all workflow nodes."""

    def process(self, context: Dict[str, Any]) -> Optional[Dict[str, Any]]:
        """Process the node's task using the given context.

        Args:
            context (dict): The shared context dictionary.

        Returns:
            dict or None: Updates to the context, or None if the context is updated directly.
        """
        raise NotImplementedError("Subclasses must implement the process method.")

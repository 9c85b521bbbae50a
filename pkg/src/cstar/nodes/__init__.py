"""
CStar - Nodes

This package contains the stages of the verification workflow.
"""

from cstar.nodes.node import Node
from cstar.nodes.operational_check import OperationalCheckNode
from cstar.nodes.report import ReportNode
from cstar.nodes.residual_check import ResidualCheckNode
from cstar.nodes.translate import TranslateNode

__all__ = ["Node", "OperationalCheckNode", "ReportNode", "ResidualCheckNode", "TranslateNode"]

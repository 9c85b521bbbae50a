"""
CStar - Symbolic Execution

Forward symbolic execution of C segments over canonical symbolic heaps,
automatic discharge of trivial entailments, and verification conditions.
"""

from cstar.symexec.engine import FunctionSpec, SymbolicEngine, quotation_evaluator, unquote
from cstar.symexec.entail import match_conjuncts, trivially_entails
from cstar.symexec.symheap import SymHeap, canonicalize, mk_fact
from cstar.symexec.vc import VCCollector, VerificationCondition

__all__ = [
    "FunctionSpec",
    "SymHeap",
    "SymbolicEngine",
    "VCCollector",
    "VerificationCondition",
    "canonicalize",
    "match_conjuncts",
    "mk_fact",
    "quotation_evaluator",
    "trivially_entails",
    "unquote",
]

"""
CStar - Proof-Supporting Runtime

Interpreter for proof code, its builtins (kernel rules, the separation-logic
library, rewriting, arithmetic and engine access), the operational driver,
and residual proof checking.
"""

from cstar.proofrt.builtins import ProofBuiltins
from cstar.proofrt.interpreter import Interpreter, Scope
from cstar.proofrt.residual import ResidualChecker, emit_residual
from cstar.proofrt.runtime import FunctionReport, ProofRuntime, RunReport, run_proof_program
from cstar.proofrt.seprules import SepLib
from cstar.proofrt.trust import TrustReport

__all__ = [
    "FunctionReport",
    "Interpreter",
    "ProofBuiltins",
    "ProofRuntime",
    "ResidualChecker",
    "RunReport",
    "Scope",
    "SepLib",
    "TrustReport",
    "emit_residual",
    "run_proof_program",
]

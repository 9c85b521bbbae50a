"""
CStar - Proof Runtime

Runs an operational proof program: global proof blocks first, in a file
scope, then one driver per function that alternates feeding program
segments to the symbolic engine with running the function's local proof
blocks. All local blocks of a function share one scope.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Set

from cstar.cfront.slicing import Driver, ProofProgram, Segment
from cstar.kernel.registry import Registry
from cstar.kernel.terms import Term
from cstar.kernel.types import HolType
from cstar.proofrt.builtins import ProofBuiltins
from cstar.proofrt.interpreter import Interpreter, Scope
from cstar.proofrt.trust import TrustReport
from cstar.quote.env import SyntaxEnv
from cstar.seplogic.arith import ArithOracle
from cstar.symexec.engine import SymbolicEngine, quotation_evaluator
from cstar.symexec.vc import VCCollector, VerificationCondition

logger = logging.getLogger(__name__)


@dataclass
class FunctionReport:
    """Per-function counters of one run."""

    name: str
    file: Optional[str] = None
    segments: int = 0
    proof_blocks: int = 0
    vcs: int = 0
    auto_discharged: int = 0
    proved: int = 0

    def to_dict(self) -> Dict[str, object]:
        return {
            "function": self.name,
            "file": self.file,
            "segments": self.segments,
            "proof_blocks": self.proof_blocks,
            "vcs": self.vcs,
            "auto_discharged": self.auto_discharged,
            "proved": self.proved,
        }


@dataclass
class RunReport:
    """Outcome of a verification run.

    The verdict is success iff no error was raised and every VC was proved
    by a residual proof.
    """

    functions: List[FunctionReport] = field(default_factory=list)
    vcs: List[VerificationCondition] = field(default_factory=list)
    states: List[Dict[str, object]] = field(default_factory=list)
    trust: TrustReport = field(default_factory=TrustReport)
    proved: Set[str] = field(default_factory=set)
    errors: List[str] = field(default_factory=list)

    @property
    def undischarged(self) -> List[VerificationCondition]:
        return [vc for vc in self.vcs if vc.id not in self.proved]

    @property
    def success(self) -> bool:
        return not self.errors and not self.undischarged

    def mark_proved(self, ids: Set[str]) -> None:
        self.proved |= ids
        for report in self.functions:
            report.proved = sum(1 for vc in self.vcs if vc.function == report.name and vc.id in self.proved)

    def to_dict(self) -> Dict[str, object]:
        return {
            "verdict": "verified" if self.success else "failed",
            "functions": [f.to_dict() for f in self.functions],
            "vcs": [dict(vc.to_dict(), proved=vc.id in self.proved) for vc in self.vcs],
            "trust": self.trust.to_dict(),
            "errors": list(self.errors),
        }


class ProofRuntime:
    """Proof-code interpreter wired to a symbolic engine for one program.

    Args:
        registry (Registry): Registry with the separation-logic theory
        program (ProofProgram): Assembled operational proof program
        oracle (ArithOracle, optional): Arithmetic oracle; the registry's by default
    """

    def __init__(self, registry: Registry, program: ProofProgram, oracle: Optional[ArithOracle] = None):
        self.registry = registry
        self.program = program
        self.trust = TrustReport()
        self.collector = VCCollector()
        self.builtins = ProofBuiltins(registry, oracle, self.trust)
        self.engine = SymbolicEngine(
            registry,
            program.program,
            self.collector,
            spec_eval=self._spec_eval,
            trust=self.trust,
            oracle=self.builtins.oracle,
        )
        self.builtins.engine = self.engine
        self.interpreter = Interpreter(registry, self.builtins.table(), env_provider=self.engine.syntax_env)
        self.scope: Scope = self.interpreter.file_scope
        self.report = RunReport(trust=self.trust)

    def _spec_eval(self, payload: str, env: SyntaxEnv, line: int, expected: Optional[HolType]) -> Term:
        """Attribute payloads may splice the Term variables of the current proof scope."""
        return quotation_evaluator(payload, env.with_antiquotes(self.scope.terms()), line, expected)

    def run_global_blocks(self) -> None:
        for block in self.program.global_proofs:
            logger.debug(f"running global proof block at {block.file}:{block.line}")
            self.interpreter.run_block(block, self.interpreter.file_scope, global_block=True)

    def run_driver(self, driver: Driver) -> FunctionReport:
        """Feed one function's segments, running its local proof blocks in between."""
        func = driver.function
        report = FunctionReport(func.name, func.file)
        self.report.functions.append(report)
        self.scope = self.interpreter.file_scope.child()
        try:
            for step in driver.steps:
                if isinstance(step, Segment):
                    self.engine.feed(step)
                    report.segments += 1
                else:
                    logger.debug(f"{func.name}: running proof block at {step.file}:{step.line}")
                    self.interpreter.run_block(step, self.scope, global_block=False)
                    report.proof_blocks += 1
        finally:
            self.scope = self.interpreter.file_scope
            report.vcs = len(self.collector.for_function(func.name))
            report.auto_discharged = self.engine.auto_discharged.get(func.name, 0)
        logger.info(f"{func.name}: {report.segments} segments, {report.proof_blocks} proof blocks, "
                    f"{report.vcs} VCs")
        return report

    def run(self, on_function: Optional[Callable[[str], None]] = None) -> RunReport:
        """Run the whole program and return the report.

        Args:
            on_function (callable, optional): Called with each function name once verified

        Raises:
            CStarError: The first error of the run
        """
        self.run_global_blocks()
        for driver in self.program.drivers:
            self.run_driver(driver)
            if on_function is not None:
                on_function(driver.function.name)
        self.report.vcs = list(self.collector.vcs)
        self.report.states = list(self.engine.states)
        if self.report.vcs:
            logger.info(f"{len(self.report.vcs)} verification conditions remain after operational checking")
        return self.report


def run_proof_program(registry: Registry, program: ProofProgram,
                      oracle: Optional[ArithOracle] = None) -> RunReport:
    """Interpret global blocks, then every driver, against a fresh engine."""
    return ProofRuntime(registry, program, oracle).run()

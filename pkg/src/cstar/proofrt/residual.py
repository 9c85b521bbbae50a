"""
CStar - Residual Proof Checking

The residual proof program discharges the verification conditions left by
operational checking. It is a file of global proof blocks defining
`thm proofN()` functions and, optionally, a `main` that calls
`assert_prove(proofN(), vcN)` per VC. Without a `main`, each `proofN` found
is asserted against vcN.
"""

import logging
from collections import defaultdict
from typing import Dict, List, Sequence, Set

from cstar.cfront import ast
from cstar.cfront.parser import parse_program
from cstar.cfront.preprocess import Preprocessor
from cstar.errors import ParseError
from cstar.kernel.terms import Abs, Var, alpha_eq, frees, subterms
from cstar.proofrt.interpreter import Binding, ProofFunction
from cstar.proofrt.runtime import ProofRuntime
from cstar.quote.env import SyntaxEnv
from cstar.quote.printer import print_term
from cstar.symexec.vc import VerificationCondition

logger = logging.getLogger(__name__)

TERM = ast.CType("term")


def vc_scope(env: SyntaxEnv, vcs: Sequence[VerificationCondition]) -> SyntaxEnv:
    """Logical scope of the residual program: variables of the VC goals.

    Free and bound variables of every goal are visible by name, as long as
    all occurrences of the name share one type.
    """
    by_name: Dict[str, Set[Var]] = defaultdict(set)
    for vc in vcs:
        for v in frees(vc.goal):
            by_name[v.name].add(v)
        for sub in subterms(vc.goal):
            if isinstance(sub, Abs):
                by_name[sub.bvar.name].add(sub.bvar)
    unique = [next(iter(found)) for _, found in sorted(by_name.items()) if len(found) == 1]
    return env.with_variables(unique)


class ResidualChecker:
    """Runs a residual proof file against the VCs of an operational run.

    Args:
        runtime (ProofRuntime): The runtime that produced the VCs; its file
            scope (proof functions of the program's global blocks) stays visible
    """

    def __init__(self, runtime: ProofRuntime):
        self.runtime = runtime
        self.interpreter = runtime.interpreter
        self.builtins = runtime.builtins

    def check(self, path: str, vcs: Sequence[VerificationCondition], include_dirs: Sequence[str] = (),
              already_included: Sequence[str] = ()) -> Set[str]:
        """Run the residual file and return the ids of the VCs it proves.

        Raises:
            ParseError: If the file defines C functions or has syntax errors
            VerificationFailure: If an assert_prove does not match its VC
        """
        expanded = Preprocessor(include_dirs, prelude=False, already_included=already_included).expand_file(path)
        program = parse_program(expanded.text, path, expanded)
        if program.functions:
            first = program.functions[0]
            raise ParseError("residual proof files may only contain proof blocks and declarations",
                             first.file or path, first.line)

        scope = self.interpreter.file_scope.child()
        for vc in vcs:
            scope.bindings[vc.id] = Binding(TERM, vc.goal)
        env = vc_scope(SyntaxEnv(self.runtime.registry), vcs)
        self.interpreter.env_provider = lambda: env
        self.builtins.engine = None
        self.builtins.vcs = list(vcs)
        self.builtins.proved = []

        for block in program.global_proofs:
            self.interpreter.run_block(block, scope, global_block=True)

        main = scope.bindings.get("main")
        if main is not None and isinstance(main.value, ProofFunction):
            logger.debug("running residual main")
            self.interpreter.call(main.value, [])
        else:
            assert_prove = self.interpreter.lookup_function("assert_prove")
            for index, vc in enumerate(vcs, start=1):
                found = scope.bindings.get(f"proof{vc.id[2:]}") or scope.bindings.get(f"proof{index}")
                if found is None or not isinstance(found.value, ProofFunction):
                    logger.debug(f"no residual proof for {vc.id}")
                    continue
                theorem = self.interpreter.call(found.value, [])
                self.interpreter.call(assert_prove, [theorem, vc.goal])

        proved = {vc.id for vc in vcs if any(alpha_eq(vc.goal, g) for g in self.builtins.proved)}
        logger.info(f"residual proofs discharged {len(proved)} of {len(vcs)} VCs")
        return proved


def emit_residual(vcs: Sequence[VerificationCondition], source: str = "") -> str:
    """Skeleton residual proof program with one stub per VC.

    Args:
        vcs (list): Remaining verification conditions, in id order
        source (str): Name of the verified file, for the header comment

    Returns:
        str: Text of a .cst file of global proof blocks
    """
    lines: List[str] = [f"// Residual proof program for {source}" if source else "// Residual proof program"]
    if not vcs:
        return "\n".join(lines) + "\n"
    lines.append("«")
    for vc in vcs:
        number = vc.id[2:]
        where = f"{vc.file}:{vc.line}" if vc.file else f"line {vc.line}"
        lines.extend([
            f"thm proof{number}(void)",
            "{",
            f"    // {vc.id} ({vc.kind}) in {vc.function} at {where}:",
            f"    //   {print_term(vc.goal)}",
            "    return NULL;",
            "}",
            "",
        ])
    lines.append("void main(void)")
    lines.append("{")
    lines.extend(f"    assert_prove(proof{vc.id[2:]}(), {vc.id});" for vc in vcs)
    lines.append("}")
    lines.append("»")
    return "\n".join(lines) + "\n"

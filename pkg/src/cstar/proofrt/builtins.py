"""
CStar - Proof Builtins

Functions proof code can call: the kernel rules, the term API, the
separation-logic library, rewriting, the arithmetic oracle, theory
extension, the library lemmas, and access to the symbolic engine.

Every builtin checks the kinds of its arguments before running; kernel and
library errors propagate to the interpreter, which attaches the location.
"""

import logging
from typing import Any, Callable, Dict, List, Optional, Sequence

from cstar.errors import ProofRuntimeError, RuleError, VerificationFailure
from cstar.kernel import thm as rules
from cstar.kernel.registry import Registry
from cstar.kernel.terms import (
    Var,
    alpha_eq,
    dest_binop,
    dest_entail,
    dest_eq,
    dest_hexists,
    dest_imp,
    dest_sep,
    mk_sep,
    strip_forall,
)
from cstar.kernel.thm import Theorem
from cstar.kernel.types import HPROP, TyVar
from cstar.proofrt.conv import beta_conv, rewrite, rewrite_rule_list
from cstar.proofrt.interpreter import TERM_TYPES, type_name
from cstar.proofrt.seprules import SepLib
from cstar.proofrt.trust import TrustReport
from cstar.quote.parser import parse_type
from cstar.quote.printer import print_term
from cstar.seplogic.arith import ArithOracle, get_oracle
from cstar.seplogic.theory import ARRAY_LEMMAS, array_lemma
from cstar.symexec.vc import VerificationCondition

logger = logging.getLogger(__name__)
output = logging.getLogger("cstar.proofrt")


def show(value: Any) -> str:
    """Printed form of a proof value."""
    if isinstance(value, Theorem):
        hyps = ", ".join(print_term(h) for h in value.hyps)
        return f"{hyps} |- {print_term(value.concl)}" if hyps else f"|- {print_term(value.concl)}"
    if isinstance(value, TERM_TYPES):
        return f"`{print_term(value)}`"
    if isinstance(value, list):
        return "{" + ", ".join(show(v) for v in value) + "}"
    if value is None:
        return "NULL"
    return str(value)


def _accepts(kind: str, value: Any) -> bool:
    if kind == "any":
        return True
    if kind == "int":
        return isinstance(value, int)
    if kind == "string":
        return isinstance(value, str)
    if kind == "term":
        return isinstance(value, TERM_TYPES)
    if kind == "var":
        return isinstance(value, Var)
    if kind == "hprop":
        return isinstance(value, TERM_TYPES) and value.ty == HPROP
    if kind == "thm":
        return isinstance(value, Theorem)
    if kind == "thm?":
        return value is None or isinstance(value, Theorem)
    if kind == "thms":
        return isinstance(value, list) and all(v is None or isinstance(v, Theorem) for v in value)
    raise ValueError(f"unknown argument kind {kind}")


def checked(name: str, kinds: Sequence[str], fn: Callable[..., Any]) -> Callable[..., Any]:
    """Wrap fn with an arity and argument-kind check."""

    def call(*args: Any) -> Any:
        if len(args) != len(kinds):
            raise ProofRuntimeError(f"{name} expects {len(kinds)} arguments, got {len(args)}")
        for position, (kind, value) in enumerate(zip(kinds, args), start=1):
            if not _accepts(kind, value):
                raise ProofRuntimeError(
                    f"runtime type error: argument {position} of {name} expects {kind.rstrip('?')}, "
                    f"got {type_name(value)}"
                )
        return fn(*args)

    return call


class ProofBuiltins:
    """Builtin table bound to one verification run.

    Args:
        registry (Registry): Kernel registry with the separation-logic theory
        oracle (ArithOracle, optional): Arithmetic oracle; the registry's by default
        trust (TrustReport, optional): Receives theorems accepted by assert_prove
    """

    def __init__(self, registry: Registry, oracle: Optional[ArithOracle] = None,
                 trust: Optional[TrustReport] = None):
        self.registry = registry
        self.oracle = oracle or get_oracle(registry)
        self.trust = trust if trust is not None else TrustReport()
        self.seplib = SepLib(registry, self.oracle)
        self.engine = None
        self.vcs: List[VerificationCondition] = []
        self.proved: List[Any] = []

    def table(self) -> Dict[str, Callable[..., Any]]:
        lib = self.seplib
        entries = {
            # kernel rules
            "refl": (("term",), rules.refl),
            "trans": (("thm", "thm"), rules.trans),
            "symm": (("thm",), self.symm),
            "assume": (("term",), rules.assume),
            "eq_mp": (("thm", "thm"), rules.eq_mp),
            "deduct_antisym": (("thm", "thm"), rules.deduct_antisym),
            "abs_rule": (("var", "thm"), rules.abs_rule),
            "mk_comb": (("thm", "thm"), rules.mk_comb_rule),
            "beta": (("term",), rules.beta),
            "inst": (("thm", "var", "term"), lambda th, v, t: rules.inst({v: t}, th)),
            "inst_type": (("thm", "string", "string"), self.inst_type),
            "mp": (("thm", "thm"), rules.mp),
            "disch": (("term", "thm"), rules.disch),
            "spec": (("term", "thm"), rules.spec),
            "gen": (("var", "thm"), rules.gen),
            "spec_all": (("thm",), self.spec_all),
            "axiom": (("string",), self.registry.axiom),
            "definition": (("string",), self.registry.definition),
            # term API
            "is_sep": (("term",), lambda t: int(dest_sep(t) is not None)),
            "left_of_sep": (("term",), lambda t: self._sep_side(t, 0, "left_of_sep")),
            "right_of_sep": (("term",), lambda t: self._sep_side(t, 1, "right_of_sep")),
            "mk_sep": (("hprop", "hprop"), mk_sep),
            "is_exists": (("term",), lambda t: int(dest_hexists(t) is not None)),
            "antecedent": (("term",), lambda t: self._side(t, 0, "antecedent")),
            "consequent": (("term",), lambda t: self._side(t, 1, "consequent")),
            "conclusion": (("thm",), rules.conclusion),
            "hypotheses": (("thm",), lambda th: list(rules.hypotheses(th))),
            "equals_term": (("term", "term"), lambda a, b: int(alpha_eq(a, b))),
            "print": (("any",), self.print_value),
            "print_state": ((), self.print_state),
            # separation-logic library
            "hsep_comm": (("hprop",), lib.hsep_comm),
            "hsep_move": (("hprop",), lib.hsep_move),
            "sep_normalize": (("hprop",), lib.sep_normalize),
            "sep_lift": (("hprop", "hprop"), lib.sep_lift),
            "sep_lift_one": (("hprop", "hprop"), self.sep_lift_one),
            "sep_reorder": (("hprop", "hprop"), lib.sep_reorder),
            "sep_solve": (("hprop", "hprop"), lib.sep_solve),
            "sep_solve_using": (("hprop", "hprop", "thms"), self.sep_solve_using),
            "local_apply": (("hprop", "thm"), lib.local_apply),
            "entail_refl": (("hprop",), lib.entail_refl),
            "entail_trans": (("thm", "thm"), lib.entail_trans),
            "entail_of_eq": (("thm",), lib.entail_of_eq),
            "hexists_intro": (("hprop", "term"), lib.hexists_intro),
            "hexists_elim": (("hprop", "thm"), lib.hexists_elim),
            "exists_mono": (("var", "thm"), lib.exists_mono),
            "fact_intro": (("thm", "hprop"), lib.fact_intro),
            "fact_elim": (("thm",), lib.fact_elim),
            "fact_keep": (("thm",), lib.fact_keep),
            "sep_cancel": (("thm", "hprop"), lib.sep_cancel),
            "sep_frame": (("hprop", "thm"), lib.sep_frame),
            "beta_norm": (("term",), beta_conv),
            # rewriting and arithmetic
            "rewrite": (("thm", "term"), rewrite),
            "rewrite_rule_list": (("thms", "thm"), self.rewrite_rule_list),
            "arith_rule": (("term",), self.oracle.prove),
            # engine
            "get_symbolic_state": ((), self.get_symbolic_state),
            "set_symbolic_state": (("thm",), self.set_symbolic_state),
            "feed_program_segment": (("any",), self.feed_program_segment),
            "assert_prove": (("thm?", "term"), self.assert_prove),
            # theory extension
            "new_constant": (("string", "string"), self.new_constant),
            "new_axiom": (("string", "term"), self.new_axiom),
            "new_definition": (("string", "term"), self.new_definition),
        }
        for name in ARRAY_LEMMAS:
            arity = len(strip_forall(self.registry.axiom(name).concl)[0])
            entries[name] = (("term",) * arity, self._lemma(name))
        return {name: checked(name, kinds, fn) for name, (kinds, fn) in entries.items()}

    # -- kernel helpers ---------------------------------------------------------

    @staticmethod
    def symm(th: Theorem) -> Theorem:
        """symm, also under universal quantifiers."""
        bound, _ = strip_forall(th.concl)
        for v in bound:
            th = rules.spec(v, th)
        th = rules.symm(th)
        for v in reversed(bound):
            th = rules.gen(v, th)
        return th

    @staticmethod
    def spec_all(th: Theorem) -> Theorem:
        for v in strip_forall(th.concl)[0]:
            th = rules.spec(v, th)
        return th

    def inst_type(self, th: Theorem, tyvar: str, ty: str) -> Theorem:
        var = parse_type(tyvar, self.registry)
        if not isinstance(var, TyVar):
            raise RuleError(f"{tyvar} is not a type variable")
        return rules.inst_type({var: parse_type(ty, self.registry)}, th)

    # -- term API ---------------------------------------------------------------

    @staticmethod
    def _sep_side(t, index: int, name: str):
        parts = dest_sep(t)
        if parts is None:
            raise RuleError(f"{name}: {print_term(t)} is not a separating conjunction")
        return parts[index]

    @staticmethod
    def _side(t, index: int, name: str):
        parts = dest_imp(t) or dest_entail(t) or dest_binop("-|-", t) or dest_eq(t)
        if parts is None:
            raise RuleError(f"{name}: {print_term(t)} is not an implication, entailment or equation")
        return parts[index]

    def print_value(self, value: Any) -> None:
        output.info(show(value))

    def print_state(self) -> None:
        output.info(f"symbolic state: {print_term(self.get_symbolic_state())}")

    # -- library ----------------------------------------------------------------

    def sep_lift_one(self, target, t) -> Optional[Theorem]:
        """sep_lift for a single conjunct; NULL when target is not a conjunct of t."""
        try:
            return self.seplib.sep_lift(target, t)
        except RuleError:
            return None

    def sep_solve_using(self, lhs, target, lemmas: List[Optional[Theorem]]) -> Theorem:
        return self.seplib.sep_solve(lhs, target, _until_null(lemmas))

    @staticmethod
    def rewrite_rule_list(eqs: List[Optional[Theorem]], th: Theorem) -> Theorem:
        return rewrite_rule_list(_until_null(eqs), th)

    def _lemma(self, name: str) -> Callable[..., Theorem]:
        return lambda *args: array_lemma(self.registry, name, args)

    # -- theory extension -------------------------------------------------------

    def new_constant(self, name: str, ty: str) -> None:
        self.registry.new_constant(name, parse_type(ty, self.registry))
        logger.debug(f"proof code declared constant {name} : {ty}")

    def new_axiom(self, tag: str, statement) -> Theorem:
        logger.debug(f"proof code asserted axiom {tag}")
        return self.registry.new_axiom(tag, statement)

    def new_definition(self, name: str, body) -> Theorem:
        return self.registry.define(name, body)

    # -- engine -----------------------------------------------------------------

    def _require_engine(self, name: str):
        if self.engine is None:
            raise ProofRuntimeError(f"{name} is only available while verifying a function")
        return self.engine

    def get_symbolic_state(self):
        return self._require_engine("get_symbolic_state").get_state_term()

    def set_symbolic_state(self, th: Theorem) -> None:
        self._require_engine("set_symbolic_state").set_state_from(th)

    def feed_program_segment(self, segment: Any) -> None:
        raise ProofRuntimeError("feed_program_segment is reserved for the verification driver")

    def assert_prove(self, th: Optional[Theorem], goal) -> None:
        """Accept th as the proof of goal.

        Raises:
            VerificationFailure: Naming the VC when th does not prove goal outright
        """
        label = next((vc.id for vc in self.vcs if alpha_eq(vc.goal, goal)), "goal")
        if th is None:
            raise VerificationFailure(f"{label}: no proof (NULL theorem)")
        if th.hyps:
            hyps = ", ".join(print_term(h) for h in th.hyps)
            raise VerificationFailure(f"{label}: theorem has hypotheses {hyps}")
        if not alpha_eq(th.concl, goal):
            raise VerificationFailure(
                f"{label}: theorem proves {print_term(th.concl)}, expected {print_term(goal)}"
            )
        self.trust.record(th)
        self.proved.append(goal)
        logger.debug(f"{label} proved")


def _until_null(thms: List[Optional[Theorem]]) -> List[Theorem]:
    """Elements of a NULL-terminated theorem array."""
    found: List[Theorem] = []
    for th in thms:
        if th is None:
            break
        found.append(th)
    return found

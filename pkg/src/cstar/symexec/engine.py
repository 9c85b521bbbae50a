"""
CStar - Symbolic Execution Engine

Forward symbolic execution over symbolic heaps. The engine consumes the
event stream of program segments, keeps one symbolic heap per live path, and
turns every entailment it cannot discharge by reordering and arithmetic into
a verification condition.

Path discipline: branches fork the state and both halves continue to the
join; after the join the next statement must be an assertion (symbolic heaps
have no disjunction). `break` states wait for the first assertion after the
loop.
"""

import logging
import re
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from cstar.cfront import ast
from cstar.cfront.slicing import (
    BlockBegin,
    BlockEnd,
    ElseBegin,
    Event,
    FuncEntry,
    FuncExit,
    IfBegin,
    IfEnd,
    Segment,
    Simple,
    WhileBegin,
    WhileEnd,
)
from cstar.errors import CStarError, QuoteError, StaleStateError, SymExecError, VerificationFailure
from cstar.kernel.registry import Registry
from cstar.kernel.terms import (
    Term,
    Var,
    alpha_eq,
    dest_binop,
    dest_entail,
    frees,
    list_mk_app,
    list_mk_hexists,
    list_mk_sep,
    mk_addr,
    mk_entail,
    mk_hexists,
    mk_imp,
    mk_not,
    subterms,
    variant_name,
    vsubst,
)
from cstar.kernel.thm import Theorem
from cstar.kernel.types import HPROP, INTEGER, HolType
from cstar.quote.env import SyntaxEnv
from cstar.quote.parser import parse_term, parse_type
from cstar.quote.printer import print_term
from cstar.seplogic.arith import ArithOracle, arith_equal, get_oracle
from cstar.seplogic.matching import Match, instantiate, match_term
from cstar.symexec.entail import conjoin, contradictory, match_conjuncts, pures_imply, trivially_entails
from cstar.symexec.symheap import SymHeap, canonicalize, dest_maps_to, mk_fact
from cstar.symexec.translate import ExprTranslator, ctype_term
from cstar.symexec.vc import VCCollector, VerificationCondition

logger = logging.getLogger(__name__)

RESULT_NAME = "__result"

# (payload, syntax environment, line, expected type) -> term
SpecEvaluator = Callable[[str, SyntaxEnv, int, Optional[HolType]], Term]

_GHOST_BINDING = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_']*)\s*=(?![=>])(.*)$", re.DOTALL)


def unquote(payload: str, line: int = 0) -> str:
    """Body of a payload that is a single backtick quotation."""
    text = payload.strip()
    if len(text) >= 2 and text[0] == "`" and text[-1] == "`" and text.count("`") == 2:
        return text[1:-1]
    raise QuoteError(f"expected a quotation, found {text!r}", line=line)


def quotation_evaluator(payload: str, env: SyntaxEnv, line: int, expected: Optional[HolType] = None) -> Term:
    """Evaluate payloads that are plain quotations."""
    return parse_term(unquote(payload, line), env, expected)


def parse_ghost(payload: str, env: SyntaxEnv, line: int = 0) -> Var:
    """`name:type` of a ghost parameter."""
    text = unquote(payload, line)
    name, sep, ty = text.partition(":")
    if not sep or not name.strip():
        raise QuoteError(f"ghost parameter must read `name:type`, found `{text}`", line=line)
    return Var(name.strip(), parse_type(ty.strip(), env.registry))


@dataclass
class FunctionSpec:
    """Parsed signature of a function: logical parameters, contract, result variable."""

    params: List[Var]
    ghosts: List[Var]
    require: Term
    ensure: Term
    result: Optional[Var] = None

    @property
    def leading(self) -> List[Var]:
        return self.params + self.ghosts


@dataclass
class Frame:
    """A lexical scope; loops and branches carry their extra bookkeeping."""

    kind: str
    variables: Dict[str, ast.CType] = field(default_factory=dict)
    line: int = 0
    # if
    else_paths: List[SymHeap] = field(default_factory=list)
    then_paths: Optional[List[SymHeap]] = None
    # while
    invariant: Optional[Term] = None
    cond: Optional[ast.Expr] = None
    breaks: List[SymHeap] = field(default_factory=list)


class SymbolicEngine:
    """Executes program segments and collects verification conditions.

    Args:
        registry (Registry): Registry with the separation-logic theory
        program (CProgram): Program whose signatures calls are checked against
        collector (VCCollector, optional): Run-wide VC list
        spec_eval (callable, optional): Evaluates attribute payloads to terms
        trust (object, optional): Receives theorems installed as states (`record(th)`)
        oracle (ArithOracle, optional): Arithmetic oracle; the registry's by default
    """

    def __init__(
        self,
        registry: Registry,
        program: ast.CProgram,
        collector: Optional[VCCollector] = None,
        spec_eval: Optional[SpecEvaluator] = None,
        trust=None,
        oracle: Optional[ArithOracle] = None,
    ):
        self.registry = registry
        self.program = program
        self.collector = collector or VCCollector()
        self.spec_eval = spec_eval or quotation_evaluator
        self.trust = trust
        self.oracle = oracle or get_oracle(registry)
        self.global_vars: Dict[str, ast.CType] = {g.name: g.ty for g in program.globals}
        for name, ty in self.global_vars.items():
            if ty.array:
                raise SymExecError(f"array global {name} is not supported")
        self.states: List[Dict[str, object]] = []
        self.auto_discharged: Dict[str, int] = {}
        self._specs: Dict[str, FunctionSpec] = {}
        self._reset(None)

    def _reset(self, func: Optional[ast.FuncDef]) -> None:
        self.function = func
        self.spec: Optional[FunctionSpec] = None
        self.frames: List[Frame] = []
        self.paths: List[SymHeap] = []
        self.pending_breaks: List[SymHeap] = []
        self._current: Optional[SymHeap] = None
        self.translator = ExprTranslator(self.registry, self.lookup, self._load, self._side_condition)

    @property
    def file(self) -> Optional[str]:
        return self.function.file if self.function else None

    # ------------------------------------------------------------------
    # Signatures
    # ------------------------------------------------------------------

    def signature(self, func: ast.FuncDef) -> FunctionSpec:
        """Parsed contract of func with the implicit global clauses."""
        cached = self._specs.get(func.name)
        if cached is not None:
            return cached
        env = SyntaxEnv(self.registry)
        ghosts = [parse_ghost(g, env, func.line) for g in func.ghosts]
        params = [Var(p.name, INTEGER) for p in func.params]
        result = None if func.ret.is_void else Var(RESULT_NAME, INTEGER)
        env = env.with_variables(params + ghosts + ([result] if result else []))
        try:
            require = self.spec_eval(func.require, env, func.line, HPROP)
            ensure = self.spec_eval(func.ensure, env, func.line, HPROP)
        except CStarError as exc:
            raise exc.located(func.file, func.line)
        for side, term in (("require", require), ("ensure", ensure)):
            if term.ty != HPROP:
                raise QuoteError(f"{side} of {func.name} is not a heap proposition", func.file, func.line)
        require, ensure = self._with_globals(require, ensure, func)
        spec = FunctionSpec(params, ghosts, require, ensure, result)
        self._specs[func.name] = spec
        return spec

    def _with_globals(self, require: Term, ensure: Term, func: ast.FuncDef) -> Tuple[Term, Term]:
        for name, ty in self.global_vars.items():
            addr = mk_addr(name)
            cty = ctype_term(ty, func.line)
            if not any(alpha_eq(s, addr) for s in subterms(require)):
                cell = list_mk_app(self.registry.mk_const("data_at"), [addr, cty, Var(name, INTEGER)])
                require = list_mk_sep([require, cell])
            if not any(alpha_eq(s, addr) for s in subterms(ensure)):
                value = Var(name + "'", INTEGER)
                cell = list_mk_app(self.registry.mk_const("data_at"), [addr, cty, value])
                ensure = list_mk_sep([ensure, mk_hexists(value, cell)])
        return require, ensure

    # ------------------------------------------------------------------
    # Scopes and cells
    # ------------------------------------------------------------------

    def lookup(self, name: str) -> Optional[ast.CType]:
        for frame in reversed(self.frames):
            if name in frame.variables:
                return frame.variables[name]
        return self.global_vars.get(name)

    def data_at(self, addr: Term, ty: ast.CType, value: Term, line: int = 0) -> Term:
        return list_mk_app(self.registry.mk_const("data_at"), [addr, ctype_term(ty, line), value])

    def undef_data_at(self, addr: Term, ty: ast.CType, line: int = 0) -> Term:
        return list_mk_app(self.registry.mk_const("undef_data_at"), [addr, ctype_term(ty, line)])

    def _find_cell(self, heap: SymHeap, addr: Term) -> Optional[int]:
        cells = [(i, dest_maps_to(s)) for i, s in enumerate(heap.spatials)]
        cells = [(i, c) for i, c in cells if c is not None]
        for i, cell in cells:
            if alpha_eq(cell[1], addr):
                return i
        for i, cell in cells:
            if arith_equal(cell[1], addr):
                return i
        return None

    def _no_ownership(self, addr: Term, line: int) -> SymExecError:
        return SymExecError(
            f"cannot execute: no ownership of address {print_term(addr)}; "
            "transform the symbolic state in a proof block",
            self.file,
            line,
        )

    def _load(self, addr: Term, ty: ast.CType, line: int) -> Term:
        heap = self._current
        index = self._find_cell(heap, addr)
        if index is None:
            raise self._no_ownership(addr, line)
        pred, _, cty, value = dest_maps_to(heap.spatials[index])
        if value is None:
            raise SymExecError(f"reading undefined value at {print_term(addr)}", self.file, line)
        if not alpha_eq(cty, ctype_term(ty, line)):
            raise SymExecError(
                f"cell at {print_term(addr)} holds {print_term(cty)}, read as {ty}", self.file, line
            )
        return value

    def _store(self, heap: SymHeap, addr: Term, ty: ast.CType, value: Term, line: int) -> SymHeap:
        index = self._find_cell(heap, addr)
        if index is None:
            raise self._no_ownership(addr, line)
        _, cell_addr, cty, _ = dest_maps_to(heap.spatials[index])
        if not alpha_eq(cty, ctype_term(ty, line)):
            raise SymExecError(
                f"cell at {print_term(addr)} holds {print_term(cty)}, written as {ty}", self.file, line
            )
        updated = heap.copy()
        updated.spatials[index] = self.data_at(cell_addr, ty, value, line)
        return updated

    def _release(self, heap: SymHeap, names: Sequence[str], line: int) -> SymHeap:
        """Remove the cells of local variables going out of scope."""
        updated = heap.copy()
        for name in names:
            addr = mk_addr(name)
            for i, s in enumerate(updated.spatials):
                cell = dest_maps_to(s)
                if cell is not None and alpha_eq(cell[1], addr):
                    del updated.spatials[i]
                    break
            else:
                raise SymExecError(
                    f"cannot deallocate {name}: no ownership of address {print_term(addr)}",
                    self.file,
                    line,
                )
        return updated

    def _release_frames(self, heap: SymHeap, frames: Sequence[Frame], line: int) -> SymHeap:
        for frame in reversed(frames):
            heap = self._release(heap, list(reversed(list(frame.variables))), line)
        return heap

    def _side_condition(self, goal: Term, line: int) -> None:
        heap = self._current
        if pures_imply(self.oracle, heap.pures, goal) or contradictory(self.oracle, heap.pures):
            return
        premise = conjoin(heap.pures)
        statement = goal if not heap.pures else mk_imp(premise, goal)
        self._emit("side-condition", statement, line)

    # ------------------------------------------------------------------
    # Obligations
    # ------------------------------------------------------------------

    def _emit(self, kind: str, goal: Term, line: int) -> VerificationCondition:
        vc = self.collector.emit(kind, goal, self.function.name, self.file, line, self.spec.leading)
        logger.debug(f"{vc.id} ({kind}) at line {line}: {print_term(vc.goal)}")
        return vc

    def discharge(self, heap: SymHeap, target: Term, kind: str, line: int) -> Optional[VerificationCondition]:
        """Prove heap |-- target automatically, or record it as a VC.

        Binders of heap that target mentions (a returned or asserted value read
        from an existential cell) are opened: the goal then holds for every value.
        """
        mentioned = frees(target)
        if any(b in mentioned for b in heap.binders):
            heap = SymHeap([b for b in heap.binders if b not in mentioned], list(heap.pures), list(heap.spatials))
        if trivially_entails(self.oracle, heap, target):
            self.collector.auto_discharged += 1
            name = self.function.name
            self.auto_discharged[name] = self.auto_discharged.get(name, 0) + 1
            logger.debug(f"auto-discharged {kind} obligation at line {line}")
            return None
        return self._emit(kind, mk_entail(heap.to_term(), target), line)

    # ------------------------------------------------------------------
    # Quotation scope and state access
    # ------------------------------------------------------------------

    def syntax_env(self) -> SyntaxEnv:
        """Names visible to quotations at the current program point."""
        env = SyntaxEnv(self.registry)
        if self.spec is None:
            return env
        env = env.with_variables(self.spec.leading)
        if len(self.paths) != 1 or self.pending_breaks:
            return env
        heap = self.paths[0]
        env = env.with_variables(heap.binders)
        c_names: Dict[str, Term] = {}
        for name in self._visible_names():
            index = self._find_cell(heap, mk_addr(name))
            if index is not None:
                value = dest_maps_to(heap.spatials[index])[3]
                if value is not None:
                    c_names[name] = value
        return replace(env, c_names=c_names)

    def _visible_names(self) -> List[str]:
        names = list(self.global_vars)
        for frame in self.frames:
            names.extend(frame.variables)
        return names

    def single_path(self, line: int = 0) -> Optional[SymHeap]:
        if self.pending_breaks:
            raise SymExecError("break requires a post-loop assertion", self.file, line)
        if len(self.paths) > 1:
            raise SymExecError("join requires assertion", self.file, line)
        return self.paths[0] if self.paths else None

    def get_state_term(self, line: int = 0) -> Term:
        heap = self.single_path(line)
        if heap is None:
            raise SymExecError("no live symbolic state", self.file, line)
        return heap.to_term()

    def set_state_from(self, th: Theorem, line: int = 0) -> None:
        """Install the right side of |- S |-- S' (or S -|- S') as the new state."""
        current = self.get_state_term(line)
        if th.hyps:
            raise VerificationFailure("set_symbolic_state needs a theorem without hypotheses", self.file, line)
        sides = dest_entail(th.concl) or dest_binop("-|-", th.concl)
        if sides is None:
            raise VerificationFailure(
                "set_symbolic_state needs an entailment or a bi-entailment", self.file, line
            )
        if not alpha_eq(sides[0], current):
            raise StaleStateError(
                f"stale symbolic state: theorem starts from {print_term(sides[0])}", self.file, line
            )
        self.paths = [canonicalize(sides[1], self._reserved())]
        if self.trust is not None:
            self.trust.record(th)
        self._snapshot(line)

    def _reserved(self) -> List[str]:
        return [v.name for v in self.spec.leading] if self.spec else []

    def _snapshot(self, line: int) -> None:
        for heap in self.paths:
            self.states.append({
                "function": self.function.name if self.function else None,
                "file": self.file,
                "line": line,
                "state": print_term(heap.to_term()),
            })

    # ------------------------------------------------------------------
    # Functions
    # ------------------------------------------------------------------

    def begin_function(self, func: ast.FuncDef) -> SymHeap:
        """Initial state: the precondition plus a cell per parameter."""
        self._reset(func)
        self.spec = self.signature(func)
        frame = Frame("function", {p.name: p.ty for p in func.params}, func.line)
        for name in frame.variables:
            if name in self.global_vars:
                raise SymExecError(f"parameter {name} shadows a global variable", func.file, func.line)
        cells = [self.data_at(mk_addr(p.name), p.ty, v, func.line) for p, v in zip(func.params, self.spec.params)]
        self.frames = [frame]
        heap = canonicalize(list_mk_sep([self.spec.require] + cells), self._reserved())
        self.paths = [heap]
        logger.debug(f"{func.name}: initial state {heap}")
        self._snapshot(func.line)
        return heap

    def feed(self, segment: Segment) -> None:
        """Execute every event of a segment."""
        logger.debug(f"feeding {segment.function.name}/{segment.name}")
        for event in segment.events:
            try:
                self.execute(event, segment.function)
            except CStarError as exc:
                raise exc.located(segment.function.file, _event_line(event))

    def execute(self, event: Event, func: ast.FuncDef) -> None:
        line = _event_line(event)
        if isinstance(event, FuncEntry):
            self.begin_function(func)
            return
        if self.pending_breaks and not (isinstance(event, Simple) and isinstance(event.stmt, ast.Assert)):
            raise SymExecError("break requires a post-loop assertion", self.file, line)
        if isinstance(event, Simple):
            self.exec_stmt(event.stmt)
        elif isinstance(event, IfBegin):
            self._if_begin(event)
        elif isinstance(event, ElseBegin):
            frame = self.frames[-1]
            frame.then_paths = [self._release_frames(p, [frame], line) for p in self.paths]
            frame.variables = {}
            self.paths = frame.else_paths
        elif isinstance(event, IfEnd):
            frame = self.frames.pop()
            closed = [self._release_frames(p, [frame], line) for p in self.paths]
            if frame.then_paths is None:
                self.paths = closed + frame.else_paths
            else:
                self.paths = frame.then_paths + closed
        elif isinstance(event, WhileBegin):
            self._while_begin(event)
        elif isinstance(event, WhileEnd):
            self._while_end(event)
        elif isinstance(event, BlockBegin):
            self.frames.append(Frame("block", line=line))
        elif isinstance(event, BlockEnd):
            frame = self.frames.pop()
            self.paths = [self._release_frames(p, [frame], line) for p in self.paths]
        elif isinstance(event, FuncExit):
            self.finish_function(line)
            return
        self._snapshot(line)

    def finish_function(self, line: int = 0) -> None:
        """Discharge every path falling off the end against the postcondition."""
        func = self.function
        if self.paths and not func.ret.is_void:
            raise SymExecError(f"control reaches the end of non-void function {func.name}", self.file, line)
        for heap in self.paths:
            released = self._release_frames(heap, self.frames, line)
            self.discharge(released, self.spec.ensure, "postcondition", line)
        self.paths = []
        self.frames = []

    # ------------------------------------------------------------------
    # Statements
    # ------------------------------------------------------------------

    def exec_stmt(self, stmt: ast.Stmt) -> None:
        line = stmt.line
        if isinstance(stmt, ast.Assert):
            self.exec_assert(stmt.payload, line)
        elif isinstance(stmt, ast.Return):
            self._return(stmt)
        elif isinstance(stmt, ast.Break):
            self._break(line)
        elif isinstance(stmt, ast.Continue):
            self._continue(line)
        elif isinstance(stmt, ast.Decl):
            self._declare(stmt)
        elif isinstance(stmt, ast.Assign):
            heap = self.single_path(line)
            if heap is not None:
                self._assign(heap, stmt.target, stmt.value, line)
        elif isinstance(stmt, ast.ExprStmt):
            heap = self.single_path(line)
            if heap is not None:
                self._current = heap
                if isinstance(stmt.expr, ast.Call):
                    self._call(stmt.expr, line)
                else:
                    self.translator.value(stmt.expr)
        else:
            raise SymExecError(f"unsupported statement {type(stmt).__name__}", self.file, line)

    def _declare(self, stmt: ast.Decl) -> None:
        line = stmt.line
        if stmt.ty.array:
            raise SymExecError(f"array variable {stmt.name} is not supported", self.file, line)
        if self.lookup(stmt.name) is not None:
            raise SymExecError(f"declaration of {stmt.name} shadows another variable", self.file, line)
        heap = self.single_path(line)
        ctype_term(stmt.ty, line)
        self.frames[-1].variables[stmt.name] = stmt.ty
        if heap is None:
            return
        heap = heap.copy()
        heap.spatials.append(self.undef_data_at(mk_addr(stmt.name), stmt.ty, line))
        self.paths = [heap]
        if stmt.init is not None:
            self._assign(heap, ast.Name(stmt.name, line), stmt.init, line)

    def _assign(self, heap: SymHeap, target: ast.Expr, value: ast.Expr, line: int) -> None:
        self._current = heap
        if isinstance(value, ast.Call):
            result = self._call(value, line)
            if result is None:
                raise SymExecError(f"{value.fn} returns no value", self.file, line)
            heap = self.paths[0]
            self._current = heap
        else:
            result, _ = self.translator.value(value)
        addr, ty = self.translator.address(target)
        self.paths = [self._store(heap, addr, ty, result, line)]

    def exec_assert(self, payload: str, line: int) -> None:
        """Check the current paths against an assertion and continue from it."""
        env = self.syntax_env()
        asserted = self.spec_eval(payload, env, line, HPROP)
        if asserted.ty != HPROP:
            raise QuoteError("assertion is not a heap proposition", self.file, line)
        for heap in self.paths:
            self.discharge(heap, asserted, "assert", line)
        for heap in self.pending_breaks:
            self.discharge(heap, asserted, "break", line)
        live = bool(self.paths or self.pending_breaks)
        self.pending_breaks = []
        self.paths = [canonicalize(asserted, self._reserved())] if live else []

    def _return(self, stmt: ast.Return) -> None:
        line = stmt.line
        for heap in list(self.paths):
            self.paths = [heap]
            self._current = heap
            ensure = self.spec.ensure
            if stmt.value is not None:
                if self.spec.result is None:
                    raise SymExecError(f"{self.function.name} returns void", self.file, line)
                if isinstance(stmt.value, ast.Call):
                    value = self._call(stmt.value, line)
                    if value is None:
                        raise SymExecError(f"{stmt.value.fn} returns no value", self.file, line)
                    heap = self.paths[0]
                else:
                    value, _ = self.translator.value(stmt.value)
                ensure = vsubst({self.spec.result: value}, ensure)
            elif self.spec.result is not None:
                raise SymExecError(f"{self.function.name} must return a value", self.file, line)
            released = self._release_frames(heap, self.frames, line)
            self.discharge(released, ensure, "postcondition", line)
        self.paths = []

    def _innermost_loop(self, line: int, keyword: str) -> int:
        for i in range(len(self.frames) - 1, -1, -1):
            if self.frames[i].kind == "loop":
                return i
        raise SymExecError(f"{keyword} outside a loop", self.file, line)

    def _break(self, line: int) -> None:
        k = self._innermost_loop(line, "break")
        frame = self.frames[k]
        frame.breaks.extend(self._release_frames(p, self.frames[k:], line) for p in self.paths)
        self.paths = []

    def _continue(self, line: int) -> None:
        k = self._innermost_loop(line, "continue")
        frame = self.frames[k]
        for heap in self.paths:
            released = self._release_frames(heap, self.frames[k:], line)
            self.discharge(released, frame.invariant, "continue", line)
        self.paths = []

    # ------------------------------------------------------------------
    # Control flow
    # ------------------------------------------------------------------

    def _if_begin(self, event: IfBegin) -> None:
        heap = self.single_path(event.line)
        frame = Frame("if", line=event.line)
        self.frames.append(frame)
        if heap is None:
            self.paths = []
            return
        self._current = heap
        cond = self.translator.condition(event.cond)
        then_heap, else_heap = heap.with_fact(cond), heap.with_fact(mk_not(cond))
        self.paths = [] if contradictory(self.oracle, then_heap.pures) else [then_heap]
        frame.else_paths = [] if contradictory(self.oracle, else_heap.pures) else [else_heap]

    def _loop_state(self, invariant: Term, cond: ast.Expr, negate: bool) -> SymHeap:
        heap = canonicalize(invariant, self._reserved())
        self._current = heap
        fact = self.translator.condition(cond)
        return heap.with_fact(mk_not(fact) if negate else fact)

    def _while_begin(self, event: WhileBegin) -> None:
        heap = self.single_path(event.line)
        frame = Frame("loop", line=event.line, cond=event.cond)
        if heap is None:
            self.frames.append(frame)
            return
        if event.invariant is None:
            raise SymExecError("while loop requires an invariant attribute", self.file, event.line)
        invariant = self.spec_eval(event.invariant, self.syntax_env(), event.line, HPROP)
        if invariant.ty != HPROP:
            raise QuoteError("loop invariant is not a heap proposition", self.file, event.line)
        frame.invariant = invariant
        self.discharge(heap, invariant, "invariant-establish", event.line)
        self.frames.append(frame)
        self.paths = [self._loop_state(invariant, event.cond, negate=False)]

    def _while_end(self, event: WhileEnd) -> None:
        frame = self.frames.pop()
        if frame.invariant is None:
            self.paths = []
            return
        for heap in self.paths:
            released = self._release_frames(heap, [frame], event.line)
            self.discharge(released, frame.invariant, "invariant-restore", event.line)
        self.paths = [self._loop_state(frame.invariant, frame.cond, negate=True)]
        self.pending_breaks = list(frame.breaks)

    # ------------------------------------------------------------------
    # Calls
    # ------------------------------------------------------------------

    def _ghost_arguments(self, call: ast.Call, spec: FunctionSpec, line: int) -> Dict[Var, Term]:
        ghosts = {g.name: g for g in spec.ghosts}
        bound: Dict[Var, Term] = {}
        for payload in call.ghost:
            found = _GHOST_BINDING.match(unquote(payload, line))
            if found is None:
                raise QuoteError(f"argument must read `name = term`, found {payload.strip()}", line=line)
            name, rhs = found.group(1), found.group(2).strip()
            ghost = ghosts.get(name)
            if ghost is None:
                raise SymExecError(f"{call.fn} has no ghost parameter {name}", self.file, line)
            bound[ghost] = self.spec_eval(f"`{rhs}`", self.syntax_env(), line, ghost.ty)
        return bound

    def _call(self, call: ast.Call, line: int) -> Optional[Term]:
        """Apply the callee's contract to the current single path."""
        heap = self._current
        callee = self.program.function(call.fn)
        if callee is None:
            raise SymExecError(f"call to undeclared function {call.fn}", self.file, line)
        if len(call.args) != len(callee.params):
            raise SymExecError(
                f"{call.fn} expects {len(callee.params)} arguments, got {len(call.args)}", self.file, line
            )
        spec = self.signature(callee)
        theta: Dict[Var, Term] = {}
        for param, arg in zip(spec.params, call.args):
            theta[param], _ = self.translator.value(arg)
        theta.update(self._ghost_arguments(call, spec, line))

        used = heap.names() | set(self._reserved())
        for term in theta.values():
            used |= {v.name for v in frees(term)}
        logical = (frees(spec.require) | frees(spec.ensure)) - set(theta) - {spec.result}
        renaming: Dict[Var, Term] = {}
        for v in sorted(logical, key=lambda v: v.name):
            name = variant_name(v.name, used)
            used.add(name)
            renaming[v] = Var(name, v.ty)
        pre = canonicalize(vsubst({**theta, **renaming}, spec.require), used)
        used |= {v.name for v in pre.binders}
        holes = list(renaming.values()) + pre.binders

        match, consumed = self._match_precondition(heap, pre, holes)
        frame = [s for j, s in enumerate(heap.spatials) if j not in consumed]
        unresolved = [h for h in holes if h not in match[0]]
        required = [instantiate(p, match) for p in pre.pures]
        fully = len(consumed) == len(pre.spatials) and all(
            not (frees(p) & set(unresolved)) and pures_imply(self.oracle, heap.pures, p) for p in required
        )
        if not fully:
            body = list_mk_sep([mk_fact(p) for p in required]
                               + [instantiate(s, match) for s in pre.spatials] + frame)
            goal = mk_entail(heap.to_term(), list_mk_hexists(unresolved, body))
            self._emit("call-precondition", goal, line)

        result = None
        post_theta = {**theta, **renaming}
        if spec.result is not None:
            result = Var(variant_name("r", used), INTEGER)
            used.add(result.name)
            post_theta[spec.result] = result
        post = canonicalize(instantiate(vsubst(post_theta, spec.ensure), match), used)
        post_frees = post.free_vars()
        binders = list(heap.binders) + ([result] if result is not None else [])
        binders += [h for h in unresolved if h in post_frees] + post.binders
        updated = SymHeap(binders, heap.pures + post.pures, post.spatials + frame)
        self.paths = [updated]
        self._current = updated
        logger.debug(f"call {call.fn} at line {line}: {updated}")
        return result

    def _pures_hold(self, heap: SymHeap, pre: SymHeap, match: Match) -> bool:
        return all(pures_imply(self.oracle, heap.pures, instantiate(p, match)) for p in pre.pures)

    def _match_precondition(self, heap: SymHeap, pre: SymHeap, holes: List[Var]) -> Tuple[Match, List[int]]:
        """Full match whose pure part holds; otherwise the greedy partial match."""
        for match, consumed in match_conjuncts(pre.spatials, heap.spatials, holes, exact=False):
            pending = [instantiate(p, match) for p in pre.pures]
            unresolved = set(holes) - set(match[0])
            if all(not (frees(p) & unresolved) for p in pending) and self._pures_hold(heap, pre, match):
                return match, consumed
        match: Match = ({}, {})
        consumed: List[int] = []
        for pattern in pre.spatials:
            for j, target in enumerate(heap.spatials):
                if j in consumed:
                    continue
                found = match_term(pattern, target, holes, match[0], match[1], arith=True)
                if found is not None:
                    match = found
                    consumed.append(j)
                    break
        return match, consumed


def _event_line(event: Event) -> int:
    if isinstance(event, Simple):
        return event.stmt.line
    return event.line

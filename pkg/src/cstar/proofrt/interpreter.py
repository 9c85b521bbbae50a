"""
CStar - Proof Code Interpreter

Tree-walking interpreter for proof code. Values are Python ints (int, char
and bool), strings, kernel terms and theorems, None for NULL, lists for
arrays, proof functions and builtins. Terms and theorems stay opaque: proof
code can only pass them to builtins.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Sequence

from cstar.cfront import ast
from cstar.errors import CStarError, ProofRuntimeError, VerificationFailure
from cstar.kernel.registry import Registry
from cstar.kernel.terms import Abs, App, Const, Term, Var
from cstar.kernel.thm import Theorem
from cstar.proofrt.syntax import ProofFuncDef, parse_proof_block
from cstar.quote.env import SyntaxEnv
from cstar.quote.parser import parse_term

logger = logging.getLogger(__name__)

MAX_CALL_DEPTH = 100

INTEGRAL = ("int", "char", "bool")
VALUE_TYPES = INTEGRAL + ("term", "thm", "void", "code_segment_t")
TERM_TYPES = (Var, Const, App, Abs)


@dataclass
class Binding:
    ty: ast.CType
    value: Any


@dataclass
class ProofFunction:
    definition: ProofFuncDef
    closure: "Scope"

    @property
    def name(self) -> str:
        return self.definition.name


@dataclass
class Builtin:
    name: str
    fn: Callable[..., Any]


class Scope:
    """Lexical scope of proof-code bindings."""

    def __init__(self, parent: Optional["Scope"] = None):
        self.parent = parent
        self.bindings: Dict[str, Binding] = {}

    def child(self) -> "Scope":
        return Scope(self)

    def find(self, name: str) -> Optional[Binding]:
        scope: Optional[Scope] = self
        while scope is not None:
            if name in scope.bindings:
                return scope.bindings[name]
            scope = scope.parent
        return None

    def terms(self) -> Dict[str, Term]:
        """Term-valued bindings visible here, nearest first."""
        found: Dict[str, Term] = {}
        scope: Optional[Scope] = self
        while scope is not None:
            for name, binding in scope.bindings.items():
                if name not in found and isinstance(binding.value, TERM_TYPES):
                    found[name] = binding.value
            scope = scope.parent
        return found


class _Return(Exception):
    def __init__(self, value: Any):
        super().__init__()
        self.value = value


class _Break(Exception):
    pass


class _Continue(Exception):
    pass


def type_name(value: Any) -> str:
    if value is None:
        return "NULL"
    if isinstance(value, bool) or isinstance(value, int):
        return "int"
    if isinstance(value, str):
        return "string"
    if isinstance(value, Theorem):
        return "thm"
    if isinstance(value, TERM_TYPES):
        return "term"
    if isinstance(value, list):
        return "array"
    if isinstance(value, (ProofFunction, Builtin)):
        return "function"
    return type(value).__name__


def fits(ty: ast.CType, value: Any) -> bool:
    """Whether value may be stored in a variable of proof type ty."""
    if ty.array:
        element = ast.CType(ty.base)
        return isinstance(value, list) and all(fits(element, v) for v in value)
    if ty.base in INTEGRAL:
        return isinstance(value, int)
    if ty.base == "term":
        return value is None or isinstance(value, TERM_TYPES)
    if ty.base == "thm":
        return value is None or isinstance(value, Theorem)
    if ty.base == "void":
        return value is None
    return True


def param_type(ty: ast.CType) -> ast.CType:
    """`thm eqs[]` parameters receive proof arrays."""
    if ty.pointers == 1 and ty.base in VALUE_TYPES:
        return ast.CType(ty.base, array=True)
    return ty


class Interpreter:
    """Runs proof blocks against a table of builtins.

    Args:
        registry (Registry): Kernel registry quotations are parsed in
        builtins (dict): Builtin functions by name
        env_provider (callable, optional): Current logical scope for quotations
    """

    def __init__(self, registry: Registry, builtins: Dict[str, Callable[..., Any]],
                 env_provider: Optional[Callable[[], SyntaxEnv]] = None):
        self.registry = registry
        self.root = Scope()
        for name, fn in builtins.items():
            self.root.bindings[name] = Binding(ast.CType("void"), Builtin(name, fn))
        self.file_scope = self.root.child()
        self.env_provider = env_provider or (lambda: SyntaxEnv(registry))
        self.depth = 0
        self.blocks_run = 0
        self.file: Optional[str] = None

    # -- entry points ---------------------------------------------------------

    def run_block(self, block: ast.ProofBlock, scope: Scope, global_block: bool) -> None:
        """Execute one proof block in scope.

        Raises:
            ProofRuntimeError: On runtime errors, with the proof-source location
        """
        items = parse_proof_block(block, allow_functions=global_block)
        self.blocks_run += 1
        previous, self.file = self.file, block.file
        try:
            for item in items:
                if isinstance(item, ProofFuncDef):
                    self.define(item, scope)
                else:
                    self.exec_stmt(item, scope)
        except _Return:
            raise ProofRuntimeError("return outside a proof function", block.file, block.line)
        except (_Break, _Continue):
            raise ProofRuntimeError("break or continue outside a loop", block.file, block.line)
        finally:
            self.file = previous

    def define(self, item: ProofFuncDef, scope: Scope) -> None:
        if item.name in scope.bindings:
            raise ProofRuntimeError(f"redefinition of {item.name}", item.file, item.line)
        scope.bindings[item.name] = Binding(item.ret, ProofFunction(item, scope))
        logger.debug(f"defined proof function {item.name}")

    def lookup_function(self, name: str, scope: Optional[Scope] = None) -> Optional[Any]:
        binding = (scope or self.file_scope).find(name)
        if binding is not None and isinstance(binding.value, (ProofFunction, Builtin)):
            return binding.value
        return None

    def call(self, fn: Any, args: Sequence[Any], line: int = 0) -> Any:
        if isinstance(fn, Builtin):
            return self._call_builtin(fn, args, line)
        if isinstance(fn, ProofFunction):
            return self._call_function(fn, args, line)
        raise self.error(f"{type_name(fn)} value is not callable", line)

    def error(self, message: str, line: int) -> ProofRuntimeError:
        return ProofRuntimeError(message, self.file, line or None)

    # -- statements -----------------------------------------------------------

    def exec_block(self, stmts: Sequence[ast.Stmt], scope: Scope) -> None:
        for stmt in stmts:
            self.exec_stmt(stmt, scope)

    def exec_stmt(self, stmt: ast.Stmt, scope: Scope) -> None:
        line = getattr(stmt, "line", 0)
        if isinstance(stmt, ast.Decl):
            self._declare(stmt, scope)
        elif isinstance(stmt, ast.Assign):
            self._assign(stmt, scope)
        elif isinstance(stmt, ast.ExprStmt):
            self.eval(stmt.expr, scope)
        elif isinstance(stmt, ast.If):
            if self.truthy(self.eval(stmt.cond, scope), line):
                self.exec_block(stmt.then, scope.child())
            elif stmt.orelse is not None:
                self.exec_block(stmt.orelse, scope.child())
        elif isinstance(stmt, ast.While):
            while self.truthy(self.eval(stmt.cond, scope), line):
                try:
                    self.exec_block(stmt.body, scope.child())
                except _Break:
                    break
                except _Continue:
                    continue
        elif isinstance(stmt, ast.Block):
            self.exec_block(stmt.body, scope.child())
        elif isinstance(stmt, ast.Return):
            raise _Return(None if stmt.value is None else self.eval(stmt.value, scope))
        elif isinstance(stmt, ast.Break):
            raise _Break()
        elif isinstance(stmt, ast.Continue):
            raise _Continue()
        else:
            raise self.error(f"{type(stmt).__name__} is not allowed in proof code", line)

    def _check_type(self, ty: ast.CType, line: int) -> None:
        if ty.pointers:
            raise self.error("pointers are not supported in proof code", line)
        if ty.base not in VALUE_TYPES:
            raise self.error(f"type {ty.base} is not a proof-code type", line)

    def _declare(self, stmt: ast.Decl, scope: Scope) -> None:
        self._check_type(stmt.ty, stmt.line)
        if stmt.name in scope.bindings:
            raise self.error(f"redeclaration of {stmt.name}", stmt.line)
        if stmt.init is not None:
            value = self.eval(stmt.init, scope)
        elif stmt.ty.array:
            value = []
        else:
            value = 0 if stmt.ty.base in INTEGRAL else None
        if stmt.ty.base == "void" and not stmt.ty.array:
            raise self.error(f"variable {stmt.name} declared void", stmt.line)
        if not fits(stmt.ty, value):
            raise self.error(
                f"runtime type error: cannot initialize {stmt.ty.base} {stmt.name} with {type_name(value)}",
                stmt.line,
            )
        scope.bindings[stmt.name] = Binding(stmt.ty, value)

    def _assign(self, stmt: ast.Assign, scope: Scope) -> None:
        value = self.eval(stmt.value, scope)
        target = stmt.target
        if isinstance(target, ast.Name):
            binding = scope.find(target.id)
            if binding is None:
                raise self.error(f"unknown variable {target.id}", stmt.line)
            if isinstance(binding.value, (ProofFunction, Builtin)):
                raise self.error(f"cannot assign to function {target.id}", stmt.line)
            if not fits(binding.ty, value):
                raise self.error(
                    f"runtime type error: cannot assign {type_name(value)} to {binding.ty.base} {target.id}",
                    stmt.line,
                )
            binding.value = value
            return
        if isinstance(target, ast.Index):
            array = self.eval(target.base, scope)
            index = self._index(array, self.eval(target.index, scope), stmt.line)
            element = ast.CType(_element_base(target.base, scope))
            if not fits(element, value):
                raise self.error(f"runtime type error: cannot store {type_name(value)} in array", stmt.line)
            array[index] = value
            return
        raise self.error("pointers are not supported in proof code", stmt.line)

    # -- expressions ----------------------------------------------------------

    def truthy(self, value: Any, line: int) -> bool:
        if isinstance(value, int):
            return value != 0
        if value is None:
            return False
        if isinstance(value, list):
            raise self.error("runtime type error: array used as a condition", line)
        return True

    def quotation(self, text: str, scope: Scope, line: int) -> Term:
        env = self.env_provider().with_antiquotes(scope.terms())
        try:
            return parse_term(text, env)
        except CStarError as exc:
            raise ProofRuntimeError(f"in quotation: {exc.message}", self.file, line, cause=exc)

    def eval(self, expr: ast.Expr, scope: Scope) -> Any:
        line = getattr(expr, "line", 0)
        if isinstance(expr, (ast.IntLit, ast.CharLit)):
            return expr.value
        if isinstance(expr, ast.StrLit):
            return expr.value
        if isinstance(expr, ast.QuoteLit):
            return self.quotation(expr.text, scope, line)
        if isinstance(expr, ast.Name):
            binding = scope.find(expr.id)
            if binding is not None:
                return binding.value
            if expr.id == "NULL":
                return None
            raise self.error(f"unknown identifier {expr.id}", line)
        if isinstance(expr, ast.InitList):
            return [self.eval(item, scope) for item in expr.items]
        if isinstance(expr, ast.Index):
            array = self.eval(expr.base, scope)
            return array[self._index(array, self.eval(expr.index, scope), line)]
        if isinstance(expr, ast.Call):
            fn = self.lookup_function(expr.fn, scope)
            if fn is None:
                raise self.error(f"call to unbound function {expr.fn}", line)
            args = [self.eval(a, scope) for a in expr.args]
            return self.call(fn, args, line)
        if isinstance(expr, ast.Cast):
            value = self.eval(expr.operand, scope)
            self._check_type(expr.ty, line)
            if expr.ty.base in INTEGRAL and isinstance(value, int):
                return value
            if not fits(expr.ty, value):
                raise self.error(f"runtime type error: cannot cast {type_name(value)} to {expr.ty.base}", line)
            return value
        if isinstance(expr, ast.Unary):
            return self._unary(expr, scope, line)
        if isinstance(expr, ast.Binary):
            return self._binary(expr, scope, line)
        raise self.error(f"{type(expr).__name__} is not supported in proof code", line)

    def _unary(self, expr: ast.Unary, scope: Scope, line: int) -> Any:
        if expr.op in ("&", "*"):
            raise self.error("pointers are not supported in proof code", line)
        value = self.eval(expr.operand, scope)
        if expr.op == "!":
            return int(not self.truthy(value, line))
        if not isinstance(value, int):
            raise self.error(f"runtime type error: unary {expr.op} on {type_name(value)}", line)
        return -value

    def _binary(self, expr: ast.Binary, scope: Scope, line: int) -> Any:
        if expr.op == "&&":
            return int(self.truthy(self.eval(expr.left, scope), line)
                       and self.truthy(self.eval(expr.right, scope), line))
        if expr.op == "||":
            return int(self.truthy(self.eval(expr.left, scope), line)
                       or self.truthy(self.eval(expr.right, scope), line))
        left = self.eval(expr.left, scope)
        right = self.eval(expr.right, scope)
        if expr.op in ("==", "!="):
            if isinstance(left, int) and isinstance(right, int):
                same = left == right
            else:
                same = left is right
            return int(same if expr.op == "==" else not same)
        if not (isinstance(left, int) and isinstance(right, int)):
            raise self.error(
                f"runtime type error: {type_name(left)} {expr.op} {type_name(right)}", line
            )
        if expr.op in ("/", "%"):
            if right == 0:
                raise self.error("division by zero", line)
            quotient = abs(left) // abs(right) * (1 if (left >= 0) == (right >= 0) else -1)
            return quotient if expr.op == "/" else left - quotient * right
        return {
            "+": lambda: left + right,
            "-": lambda: left - right,
            "*": lambda: left * right,
            "<": lambda: int(left < right),
            "<=": lambda: int(left <= right),
            ">": lambda: int(left > right),
            ">=": lambda: int(left >= right),
        }[expr.op]()

    def _index(self, array: Any, index: Any, line: int) -> int:
        if not isinstance(array, list):
            raise self.error(f"runtime type error: subscript of {type_name(array)}", line)
        if not isinstance(index, int):
            raise self.error(f"runtime type error: index of type {type_name(index)}", line)
        if not 0 <= index < len(array):
            raise self.error(f"index {index} out of bounds for array of length {len(array)}", line)
        return index

    # -- calls ----------------------------------------------------------------

    def _call_builtin(self, fn: Builtin, args: Sequence[Any], line: int) -> Any:
        try:
            return fn.fn(*args)
        except ProofRuntimeError as exc:
            raise exc.located(self.file, line)
        except VerificationFailure as exc:
            raise exc.located(self.file, line)
        except CStarError as exc:
            raise ProofRuntimeError(f"{fn.name}: {exc.message}", self.file, line, cause=exc)
        except TypeError as exc:
            raise self.error(f"{fn.name}: {exc}", line)

    def _call_function(self, fn: ProofFunction, args: Sequence[Any], line: int) -> Any:
        definition = fn.definition
        if len(args) != len(definition.params):
            raise self.error(
                f"{fn.name} expects {len(definition.params)} arguments, got {len(args)}", line
            )
        if self.depth >= MAX_CALL_DEPTH:
            raise self.error(f"proof function recursion too deep in {fn.name}", line)
        frame = fn.closure.child()
        for param, value in zip(definition.params, args):
            ty = param_type(param.ty)
            if not fits(ty, value):
                raise self.error(
                    f"runtime type error: argument {param.name} of {fn.name} expects "
                    f"{param.ty.base}, got {type_name(value)}",
                    line,
                )
            frame.bindings[param.name] = Binding(ty, value)
        self.depth += 1
        previous, self.file = self.file, definition.file or self.file
        try:
            self.exec_block(definition.body, frame)
        except _Return as ret:
            return self._returned(fn, ret.value, line)
        except (_Break, _Continue):
            raise self.error(f"break or continue outside a loop in {fn.name}", definition.line)
        finally:
            self.depth -= 1
            self.file = previous
        if definition.ret.base != "void":
            raise self.error(f"control reaches the end of non-void proof function {fn.name}", line)
        return None

    def _returned(self, fn: ProofFunction, value: Any, line: int) -> Any:
        ret = fn.definition.ret
        if not fits(ret, value):
            raise self.error(
                f"runtime type error: {fn.name} returns {type_name(value)}, declared {ret.base}", line
            )
        return value


def _element_base(expr: ast.Expr, scope: Scope) -> str:
    if isinstance(expr, ast.Name):
        binding = scope.find(expr.id)
        if binding is not None:
            return binding.ty.base
    return "void*"

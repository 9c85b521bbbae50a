"""
CStar - Expression Translation

C expressions become logic terms. Program variables are read from their
maps-to conjuncts through the engine, pointer arithmetic is scaled by a
`sizeof` term, and integer arithmetic is exact.
"""

from typing import Callable, Optional, Tuple

from cstar.cfront import ast
from cstar.errors import SymExecError
from cstar.kernel.registry import Registry
from cstar.kernel.terms import (
    CONJ,
    DISJ,
    NEG,
    App,
    Const,
    Term,
    dest_int,
    mk_addr,
    mk_binop,
    mk_eq,
    mk_int,
    mk_not,
)
from cstar.kernel.types import CTYPE

ARITH_OPS = ("+", "-", "*", "/", "%")
COMPARISONS = ("<", "<=", ">", ">=")

# A load: (address, C type of the cell, line) -> stored value.
Loader = Callable[[Term, ast.CType, int], Term]
# Variable lookup: name -> declared C type, or None when not in scope.
Scope = Callable[[str], Optional[ast.CType]]
# Side condition: (pure goal, line) -> None.
SideCondition = Callable[[Term, int], None]


def ctype_term(ty: ast.CType, line: int = 0) -> Const:
    """The logic ctype constant for values of C type ty."""
    name = ty.logic_name()
    if name is None:
        raise SymExecError(f"C type {ty} has no logic counterpart", line=line)
    return Const(name, CTYPE)


class ExprTranslator:
    """Translate C expressions in the current symbolic state.

    Args:
        registry (Registry): Registry holding the arithmetic constants
        scope (callable): Declared type of a program variable in scope
        load (callable): Reads a cell of the current state
        side_condition (callable): Receives divisors that must be non-zero
    """

    def __init__(self, registry: Registry, scope: Scope, load: Loader, side_condition: SideCondition):
        self.registry = registry
        self.scope = scope
        self.load = load
        self.side_condition = side_condition

    # -- helpers ------------------------------------------------------------

    def op(self, name: str, left: Term, right: Term) -> Term:
        return mk_binop(self.registry.mk_const(name), left, right)

    def sizeof(self, ty: ast.CType, line: int) -> Term:
        return App(self.registry.mk_const("sizeof"), ctype_term(ty, line))

    def offset(self, base: Term, index: Term, pointee: ast.CType, line: int) -> Term:
        """`base + index * sizeof(T)`."""
        if pointee.is_void:
            raise SymExecError("arithmetic on a void pointer; cast it first", line=line)
        return self.op("+", base, self.op("*", index, self.sizeof(pointee, line)))

    def variable(self, name: str, line: int) -> ast.CType:
        ty = self.scope(name)
        if ty is None:
            raise SymExecError(f"unknown variable {name}", line=line)
        if ty.array:
            raise SymExecError(f"array variable {name} is not supported", line=line)
        return ty

    # -- lvalues ------------------------------------------------------------

    def address(self, expr: ast.Expr) -> Tuple[Term, ast.CType]:
        """Address of an lvalue and the C type of the object stored there."""
        line = getattr(expr, "line", 0)
        if isinstance(expr, ast.Name):
            return mk_addr(expr.id), self.variable(expr.id, line)
        if isinstance(expr, ast.Unary) and expr.op == "*":
            pointer, ty = self.value(expr.operand)
            if not ty.is_pointer:
                raise SymExecError("dereference of a non-pointer", line=line)
            pointee = ty.pointee()
            if pointee.is_void:
                raise SymExecError("dereference of a void pointer", line=line)
            return pointer, pointee
        if isinstance(expr, ast.Index):
            pointer, ty = self.value(expr.base)
            if not ty.is_pointer:
                raise SymExecError("subscript of a non-pointer", line=line)
            index, _ = self.value(expr.index)
            return self.offset(pointer, index, ty.pointee(), line), ty.pointee()
        raise SymExecError("expression is not assignable", line=line)

    # -- rvalues ------------------------------------------------------------

    def value(self, expr: ast.Expr) -> Tuple[Term, ast.CType]:
        """Logic value of expr and its C type."""
        line = getattr(expr, "line", 0)
        if isinstance(expr, ast.IntLit):
            return mk_int(expr.value), ast.INT
        if isinstance(expr, ast.CharLit):
            return mk_int(expr.value), ast.CHAR
        if isinstance(expr, ast.Name):
            ty = self.variable(expr.id, line)
            return self.load(mk_addr(expr.id), ty, line), ty
        if isinstance(expr, ast.Cast):
            term, _ = self.value(expr.operand)
            return term, expr.ty
        if isinstance(expr, ast.SizeOf):
            return self.sizeof(expr.ty, line), ast.INT
        if isinstance(expr, (ast.Index,)) or (isinstance(expr, ast.Unary) and expr.op == "*"):
            addr, ty = self.address(expr)
            return self.load(addr, ty, line), ty
        if isinstance(expr, ast.Unary):
            return self._unary(expr, line)
        if isinstance(expr, ast.Binary):
            return self._binary(expr, line)
        if isinstance(expr, ast.Call):
            raise SymExecError(
                f"call to {expr.fn} must be a whole statement, an assignment or an initializer",
                line=line,
            )
        raise SymExecError(f"unsupported expression {type(expr).__name__}", line=line)

    def _unary(self, expr: ast.Unary, line: int) -> Tuple[Term, ast.CType]:
        if expr.op == "&":
            target = expr.operand
            if isinstance(target, ast.Unary) and target.op == "*":
                return self.value(target.operand)
            addr, ty = self.address(target)
            return addr, ty.pointer_to()
        if expr.op == "-":
            term, ty = self.value(expr.operand)
            literal = dest_int(term)
            if literal is not None:
                return mk_int(-literal), ty
            return App(NEG, term), ty
        if expr.op == "+":
            return self.value(expr.operand)
        raise SymExecError(f"operator {expr.op} yields a truth value; use it in a condition", line=line)

    def _binary(self, expr: ast.Binary, line: int) -> Tuple[Term, ast.CType]:
        if expr.op not in ARITH_OPS:
            raise SymExecError(
                f"operator {expr.op} yields a truth value; use it in a condition", line=line
            )
        left, lty = self.value(expr.left)
        right, rty = self.value(expr.right)
        if expr.op in ("+", "-") and (lty.is_pointer or rty.is_pointer):
            if lty.is_pointer and rty.is_pointer:
                raise SymExecError("pointer difference is not supported", line=line)
            if rty.is_pointer:
                if expr.op == "-":
                    raise SymExecError("integer minus pointer", line=line)
                left, lty, right, rty = right, rty, left, lty
            step = right if expr.op == "+" else App(NEG, right)
            return self.offset(left, step, lty.pointee(), line), lty
        if expr.op in ("/", "%"):
            if dest_int(right) in (0, None):
                self.side_condition(mk_not(mk_eq(right, mk_int(0))), line)
        return self.op(expr.op, left, right), lty

    # -- conditions ---------------------------------------------------------

    def condition(self, expr: ast.Expr) -> Term:
        """Truth value of a C condition as a bool term."""
        if isinstance(expr, ast.Unary) and expr.op == "!":
            return mk_not(self.condition(expr.operand))
        if isinstance(expr, ast.Binary):
            if expr.op == "&&":
                return mk_binop(CONJ, self.condition(expr.left), self.condition(expr.right))
            if expr.op == "||":
                return mk_binop(DISJ, self.condition(expr.left), self.condition(expr.right))
            if expr.op in COMPARISONS or expr.op in ("==", "!="):
                left, _ = self.value(expr.left)
                right, _ = self.value(expr.right)
                if expr.op == "==":
                    return mk_eq(left, right)
                if expr.op == "!=":
                    return mk_not(mk_eq(left, right))
                return self.op(expr.op, left, right)
        term, _ = self.value(expr)
        return mk_not(mk_eq(term, mk_int(0)))

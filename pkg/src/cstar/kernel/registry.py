"""
CStar - Kernel Registry

Append-only tables of type constructors, constant signatures, definitions,
axioms and oracles. A fresh registry already knows the logical and integer
vocabulary; the separation-logic theory is added by
cstar.seplogic.theory.register_theory.
"""

import logging
from typing import Callable, Dict, List, Optional, Tuple

from cstar.errors import KernelError, RuleError
from cstar.kernel import thm as _thm
from cstar.kernel.terms import (
    Abs,
    Const,
    Term,
    Var,
    dest_eq,
    frees,
    is_addr_name,
    mk_eq,
    is_numeral_name,
    strip_app,
    term_type_vars,
)
from cstar.kernel.thm import Theorem
from cstar.kernel.types import (
    BOOL,
    BUILTIN_TYPE_ARITIES,
    INTEGER,
    HolType,
    TyApp,
    TyVar,
    fun_ty,
    type_match,
    type_to_string,
    type_vars,
)

logger = logging.getLogger(__name__)

_A = TyVar("a")
_BIN_INT = fun_ty(INTEGER, fun_ty(INTEGER, INTEGER))
_CMP_INT = fun_ty(INTEGER, fun_ty(INTEGER, BOOL))
_BIN_BOOL = fun_ty(BOOL, fun_ty(BOOL, BOOL))

LOGIC_CONSTANTS: Dict[str, HolType] = {
    "=": fun_ty(_A, fun_ty(_A, BOOL)),
    "T": BOOL,
    "F": BOOL,
    "~": fun_ty(BOOL, BOOL),
    "&&": _BIN_BOOL,
    "||": _BIN_BOOL,
    "==>": _BIN_BOOL,
    "!": fun_ty(fun_ty(_A, BOOL), BOOL),
    "?": fun_ty(fun_ty(_A, BOOL), BOOL),
    "+": _BIN_INT,
    "-": _BIN_INT,
    "*": _BIN_INT,
    "/": _BIN_INT,
    "%": _BIN_INT,
    "EXP": _BIN_INT,
    "neg": fun_ty(INTEGER, INTEGER),
    "<": _CMP_INT,
    "<=": _CMP_INT,
    ">": _CMP_INT,
    ">=": _CMP_INT,
}


class Registry:
    """Signature and theory tables of one logical context."""

    def __init__(self):
        self.type_arities: Dict[str, int] = dict(BUILTIN_TYPE_ARITIES)
        self.constants: Dict[str, HolType] = {}
        self.definitions: Dict[str, Theorem] = {}
        self.axioms: Dict[str, Theorem] = {}
        self.oracles: Dict[str, Callable[[Term], Theorem]] = {}
        self.theories: List[str] = []
        for name, ty in LOGIC_CONSTANTS.items():
            self.new_constant(name, ty)

    # -- types -------------------------------------------------------------

    def new_type(self, name: str, arity: int) -> None:
        if name in self.type_arities:
            raise KernelError(f"type constructor {name} is already declared")
        self.type_arities[name] = arity

    def mk_type(self, name: str, args: Tuple[HolType, ...] = ()) -> HolType:
        arity = self.type_arities.get(name)
        if arity is None:
            raise KernelError(f"unknown type constructor {name}")
        if arity != len(args):
            raise KernelError(f"type constructor {name} expects {arity} arguments")
        return TyApp(name, tuple(args))

    # -- constants ---------------------------------------------------------

    def new_constant(self, name: str, ty: HolType) -> None:
        if self.is_constant(name):
            raise KernelError(f"constant {name} is already declared")
        self._check_type(ty)
        self.constants[name] = ty

    def _check_type(self, ty: HolType) -> None:
        if isinstance(ty, TyVar):
            return
        arity = self.type_arities.get(ty.name)
        if arity is None:
            raise KernelError(f"unknown type constructor {ty.name}")
        if arity != len(ty.args):
            raise KernelError(f"type constructor {ty.name} expects {arity} arguments")
        for arg in ty.args:
            self._check_type(arg)

    def is_constant(self, name: str) -> bool:
        return name in self.constants or is_numeral_name(name) or is_addr_name(name)

    def const_type(self, name: str) -> HolType:
        """Most general type of a constant (numerals and addresses are integers)."""
        if name in self.constants:
            return self.constants[name]
        if is_numeral_name(name) or is_addr_name(name):
            return INTEGER
        raise KernelError(f"unknown constant {name}")

    def mk_const(self, name: str, ty: Optional[HolType] = None) -> Const:
        """Constant at the given instance of its generic type.

        Args:
            name (str): Registered constant name
            ty (HolType, optional): Instance type; the generic type when omitted

        Returns:
            Const: The constant term
        """
        generic = self.const_type(name)
        if ty is None:
            return Const(name, generic)
        if type_match(generic, ty) is None:
            raise KernelError(
                f"{type_to_string(ty)} is not an instance of the type "
                f"{type_to_string(generic)} of {name}"
            )
        return Const(name, ty)

    # -- definitions and axioms ---------------------------------------------

    def new_basic_definition(self, name: str, equation: Term) -> Theorem:
        """Define a constant by an equation `c = body` or `c x1 .. xn = body`.

        Args:
            name (str): Name of the new constant
            equation (Term): Defining equation whose left head is a variable named name

        Returns:
            Theorem: |- c = \\x1 .. xn. body, with no axiom tags
        """
        sides = dest_eq(equation)
        if sides is None:
            raise RuleError(f"definition of {name} is not an equation")
        left, body = sides
        head, params = strip_app(left)
        if not isinstance(head, Var) or head.name != name:
            raise RuleError(f"left side of the definition must be {name} applied to variables")
        if not all(isinstance(p, Var) for p in params) or len(set(params)) != len(params):
            raise RuleError(f"parameters of {name} must be distinct variables")
        for param in reversed(params):
            body = Abs(param, body)
        return self.define(name, body)

    def define(self, name: str, body: Term) -> Theorem:
        """Register constant name with definition |- name = body (body closed)."""
        if self.is_constant(name):
            raise KernelError(f"constant {name} is already declared")
        loose = frees(body)
        if loose:
            names = ", ".join(sorted(v.name for v in loose))
            raise RuleError(f"definition of {name} has free variables: {names}")
        if not term_type_vars(body) <= type_vars(body.ty):
            raise RuleError(f"definition of {name} mentions type variables not in its type")
        self.new_constant(name, body.ty)
        theorem = _thm._mint_definition(mk_eq(Const(name, body.ty), body))
        self.definitions[name] = theorem
        logger.debug("defined constant %s", name)
        return theorem

    def new_axiom(self, tag: str, statement: Term) -> Theorem:
        if tag in self.axioms or tag in self.oracles:
            raise KernelError(f"axiom {tag} is already registered")
        if statement.ty != BOOL:
            raise RuleError(
                f"axiom {tag} has type {type_to_string(statement.ty)}, not bool"
            )
        theorem = _thm._mint(statement, tag)
        self.axioms[tag] = theorem
        return theorem

    def axiom(self, tag: str) -> Theorem:
        try:
            return self.axioms[tag]
        except KeyError:
            raise KernelError(f"unknown axiom {tag}") from None

    def definition(self, name: str) -> Theorem:
        try:
            return self.definitions[name]
        except KeyError:
            raise KernelError(f"no definition for {name}") from None

    def new_oracle(self, tag: str) -> Callable[[Term], Theorem]:
        """Register an oracle; the returned function mints theorems tagged with tag.

        The caller is responsible for deciding the statement before minting.
        """
        if tag in self.oracles or tag in self.axioms:
            raise KernelError(f"oracle {tag} is already registered")

        def mint(statement: Term) -> Theorem:
            return _thm._mint(statement, tag)

        self.oracles[tag] = mint
        return mint

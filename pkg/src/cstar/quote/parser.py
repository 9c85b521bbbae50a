"""
CStar - Quotation Parser

Two passes: a Pratt parser builds a small surface tree, then a bidirectional
elaborator turns it into a well-typed kernel term. Operators are overloaded
only by operand type (`&&` on bool vs hprop, `==` on hprop is `-|-`).
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from cstar.errors import KernelError, QuoteError
from cstar.kernel.registry import Registry
from cstar.kernel.terms import (
    BIENTAIL,
    ENTAIL,
    NOT,
    SEP,
    Abs,
    App,
    Const,
    Term,
    Var,
    binder_const,
    mk_addr,
    mk_binop,
)
from cstar.kernel.types import (
    BOOL,
    BUILTIN_TYPE_ARITIES,
    HPROP,
    INT_LIST,
    INTEGER,
    HolType,
    TyApp,
    TyVar,
    dest_fun,
    fun_ty,
    is_fun,
    list_ty,
    type_match,
    type_subst,
    type_to_string,
    type_vars,
)
from cstar.quote.env import SyntaxEnv
from cstar.quote.lexer import Token, tokenize

logger = logging.getLogger(__name__)

# Binding power and associativity of infix operators.
INFIX: Dict[str, Tuple[int, str]] = {
    "|--": (10, "non"),
    "-|-": (10, "non"),
    "**": (20, "right"),
    "==>": (25, "right"),
    "<=>": (30, "right"),
    "||": (35, "right"),
    "&&": (40, "right"),
    "==": (50, "left"),
    "=": (50, "left"),
    "!=": (50, "left"),
    "<": (50, "left"),
    "<=": (50, "left"),
    ">": (50, "left"),
    ">=": (50, "left"),
    "+": (60, "left"),
    "-": (60, "left"),
    "*": (70, "left"),
    "/": (70, "left"),
    "%": (70, "left"),
    "EXP": (80, "right"),
}

UNARY_BP = 90

TYPE_ALIASES = {"int": INTEGER, "int_list": INT_LIST}

_FALLBACK_TYPES = {"-|-": BIENTAIL.ty, "|--": ENTAIL.ty, "**": SEP.ty}


# ---------------------------------------------------------------------------
# Surface syntax
# ---------------------------------------------------------------------------


@dataclass
class SNum:
    value: int


@dataclass
class SAddr:
    name: str


@dataclass
class SIdent:
    name: str


@dataclass
class SAnti:
    name: str
    ty: Optional[HolType]


@dataclass
class SApp:
    fn: "Surface"
    args: List["Surface"]


@dataclass
class SBin:
    op: str
    left: "Surface"
    right: "Surface"


@dataclass
class SUn:
    op: str
    operand: "Surface"


@dataclass
class SBinder:
    kind: str  # exists, forall, lambda
    bvars: List[Tuple[str, Optional[HolType]]]
    body: "Surface"


@dataclass
class SList:
    items: List["Surface"]


@dataclass
class SSection:
    op: str


@dataclass
class SCoerce:
    inner: "Surface"


@dataclass
class SAscribe:
    inner: "Surface"
    ty: HolType


Surface = Union[SNum, SAddr, SIdent, SAnti, SApp, SBin, SUn, SBinder, SList, SSection, SCoerce, SAscribe]


# ---------------------------------------------------------------------------
# Pratt parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, source: str, registry: Optional[Registry]):
        self.source = source
        self.tokens = tokenize(source)
        self.index = 0
        self.registry = registry

    # token helpers

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.index]
        if tok.kind != "EOF":
            self.index += 1
        return tok

    def at_op(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "OP" and tok.text == text

    def expect_op(self, text: str) -> Token:
        tok = self.advance()
        if tok.kind != "OP" or tok.text != text:
            self.fail(f"expected '{text}'", tok)
        return tok

    def fail(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        found = tok.text or "end of quotation"
        raise QuoteError(f"{message} at offset {tok.pos} (found '{found}') in `{self.source}`")

    # expressions

    def parse_all(self) -> Surface:
        expr = self.parse_expr(0)
        if self.peek().kind != "EOF":
            self.fail("unexpected token")
        return expr

    def _infix_op(self, tok: Token) -> Optional[str]:
        if tok.kind == "OP" and tok.text in INFIX:
            return tok.text
        if tok.kind == "KW" and tok.text == "EXP":
            return "EXP"
        return None

    def _starts_atom(self, tok: Token) -> bool:
        if tok.kind in ("NUM", "AMPNUM", "ADDR", "IDENT", "ANTI"):
            return True
        if tok.kind == "OP" and tok.text in ("(", "["):
            return True
        return tok.kind == "OP" and tok.text == "&" and self.peek(1).kind == "IDENT"

    def parse_expr(self, min_bp: int) -> Surface:
        left = self.parse_prefix()
        while True:
            tok = self.peek()
            op = self._infix_op(tok)
            if op is None:
                if self._starts_atom(tok):
                    left = self._apply(left)
                    continue
                return left
            bp, assoc = INFIX[op]
            if bp < min_bp:
                return left
            self.advance()
            right = self.parse_expr(bp if assoc == "right" else bp + 1)
            left = SBin(op, left, right)
            if assoc == "non":
                nxt = self._infix_op(self.peek())
                if nxt is not None and INFIX[nxt] == (bp, "non"):
                    self.fail(f"'{op}' is non-associative; add parentheses")

    def _apply(self, fn: Surface) -> Surface:
        if self.at_op("("):
            group = self.parse_group()
            if isinstance(group, list):
                return SApp(fn, group)
            return SApp(fn, [group])
        return SApp(fn, [self.parse_atom()])

    def parse_atom(self) -> Surface:
        tok = self.peek()
        if tok.kind in ("KW",) or (tok.kind == "OP" and tok.text in ("-", "~", "!", "\\")):
            self.fail("expected an argument")
        return self.parse_prefix()

    def parse_prefix(self) -> Surface:
        tok = self.advance()
        if tok.kind in ("NUM", "AMPNUM"):
            return SNum(int(tok.text))
        if tok.kind == "ADDR":
            return SAddr(tok.text)
        if tok.kind == "IDENT":
            return SIdent(tok.text)
        if tok.kind == "ANTI":
            return self._antiquote(tok)
        if tok.kind == "KW" and tok.text in ("exists", "forall"):
            return self.parse_binder(tok.text)
        if tok.kind == "OP":
            if tok.text == "-":
                return SUn("-", self.parse_expr(UNARY_BP))
            if tok.text in ("~", "!"):
                return SUn("~", self.parse_expr(UNARY_BP))
            if tok.text == "\\":
                return self.parse_binder("lambda")
            if tok.text == "&":
                name = self.advance()
                if name.kind != "IDENT":
                    self.fail("expected an identifier after '&'", name)
                return SCoerce(SIdent(name.text))
            if tok.text == "(":
                self.index -= 1
                group = self.parse_group()
                if isinstance(group, list):
                    if len(group) != 1:
                        self.fail("tuples are not terms", tok)
                    return group[0]
                return group
            if tok.text == "[":
                return self.parse_list()
        self.fail("unexpected token", tok)

    def _antiquote(self, tok: Token) -> SAnti:
        name, _, ty_text = tok.text.partition(":")
        name = name.strip()
        if not name:
            self.fail("empty anti-quotation", tok)
        ty = parse_type(ty_text, self.registry) if ty_text.strip() else None
        return SAnti(name, ty)

    def parse_group(self) -> Union[Surface, List[Surface]]:
        """Parse `( ... )`: a section, an ascription, or a comma list."""
        self.expect_op("(")
        tok, after = self.peek(), self.peek(1)
        if after.kind == "OP" and after.text == ")":
            if self._infix_op(tok) or (tok.kind == "OP" and tok.text in ("~", "!")) or (
                tok.kind == "KW" and tok.text in ("exists", "forall")
            ):
                self.advance()
                self.advance()
                return SSection("~" if tok.text == "!" else tok.text)
        if self.at_op(")"):
            self.advance()
            return []
        first = self.parse_expr(0)
        if self.at_op(":"):
            self.advance()
            ty = self.parse_type_expr()
            self.expect_op(")")
            return SAscribe(first, ty)
        items = [first]
        while self.at_op(","):
            self.advance()
            items.append(self.parse_expr(0))
        self.expect_op(")")
        return items

    def parse_list(self) -> SList:
        items: List[Surface] = []
        if self.at_op("]"):
            self.advance()
            return SList(items)
        items.append(self.parse_expr(0))
        while self.at_op(";"):
            self.advance()
            items.append(self.parse_expr(0))
        self.expect_op("]")
        return SList(items)

    def parse_binder(self, kind: str) -> SBinder:
        bvars: List[Tuple[str, Optional[HolType]]] = []
        while not self.at_op("."):
            tok = self.peek()
            if self.at_op("("):
                self.advance()
                names = []
                while self.peek().kind == "IDENT":
                    names.append(self.advance().text)
                if not names:
                    self.fail("expected a bound variable")
                self.expect_op(":")
                ty = self.parse_type_expr()
                self.expect_op(")")
                bvars.extend((n, ty) for n in names)
            elif tok.kind == "IDENT":
                self.advance()
                ty = None
                if self.at_op(":"):
                    self.advance()
                    ty = self.parse_type_expr()
                bvars.append((tok.text, ty))
            else:
                self.fail("expected a bound variable or '.'")
        if not bvars:
            self.fail("binder without variables")
        self.expect_op(".")
        return SBinder(kind, bvars, self.parse_expr(0))

    # types

    def parse_type_expr(self) -> HolType:
        left = self._type_app()
        if self.at_op("->"):
            self.advance()
            return fun_ty(left, self.parse_type_expr())
        return left

    def _type_arity(self, name: str) -> Optional[int]:
        arities = self.registry.type_arities if self.registry else BUILTIN_TYPE_ARITIES
        return arities.get(name)

    def _type_app(self) -> HolType:
        tok = self.advance()
        if tok.kind == "TYVAR":
            return TyVar(tok.text)
        if tok.kind == "OP" and tok.text == "(":
            inner = self.parse_type_expr()
            self.expect_op(")")
            return inner
        if tok.kind == "IDENT":
            if tok.text in TYPE_ALIASES:
                return TYPE_ALIASES[tok.text]
            arity = self._type_arity(tok.text)
            if arity is None or tok.text == "fun":
                self.fail("unknown type", tok)
            args = tuple(self._type_app() for _ in range(arity))
            return TyApp(tok.text, args)
        self.fail("expected a type", tok)


def parse_type(source: str, registry: Optional[Registry] = None) -> HolType:
    """Parse an object-logic type such as `integer -> hprop` or `list 'a`."""
    parser = _Parser(source, registry)
    ty = parser.parse_type_expr()
    if parser.peek().kind != "EOF":
        parser.fail("unexpected token after type")
    return ty


# ---------------------------------------------------------------------------
# Elaboration
# ---------------------------------------------------------------------------


class _NeedsType(Exception):
    """Raised when an untyped bound variable is met before its type is known."""

    def __init__(self, name: str):
        super().__init__(name)
        self.name = name


class _Pending:
    __slots__ = ("name", "ty")

    def __init__(self, name: str, ty: Optional[HolType]):
        self.name = name
        self.ty = ty

    def var(self) -> Var:
        return Var(self.name, self.ty)


_ARITH = fun_ty(INTEGER, fun_ty(INTEGER, INTEGER))
_CMP = fun_ty(INTEGER, fun_ty(INTEGER, BOOL))
_BOOL_BIN = fun_ty(BOOL, fun_ty(BOOL, BOOL))
_POLY_EQ = fun_ty(TyVar("a"), fun_ty(TyVar("a"), BOOL))

# Operators whose constant name differs from their notation.
_OP_CONST = {"==": "=", "<=>": "="}


class _Elaborator:
    def __init__(self, env: SyntaxEnv, source: str):
        self.env = env
        self.registry = env.registry
        self.source = source
        self.scopes: List[Dict[str, _Pending]] = []

    def fail(self, message: str):
        raise QuoteError(f"{message} in `{self.source}`")

    # constants

    def generic_type(self, name: str) -> HolType:
        if self.registry.is_constant(name):
            return self.registry.const_type(name)
        if name in _FALLBACK_TYPES:
            return _FALLBACK_TYPES[name]
        self.fail(f"unknown constant {name}")

    def instance(self, name: str, ty: HolType) -> Const:
        generic = self.generic_type(name)
        if type_match(generic, ty) is None:
            self.fail(f"constant {name} cannot have type {type_to_string(ty)}")
        return Const(name, ty)

    # entry

    def elab(self, s: Surface, expected: Optional[HolType]) -> Term:
        term = self._elab(s, expected)
        if expected is not None and term.ty != expected:
            self.fail(
                f"type mismatch: expected {type_to_string(expected)}, "
                f"got {type_to_string(term.ty)}"
            )
        return term

    def _elab(self, s: Surface, expected: Optional[HolType]) -> Term:
        if isinstance(s, SNum):
            return Const(str(s.value), INTEGER)
        if isinstance(s, SAddr):
            return mk_addr(s.name)
        if isinstance(s, SIdent):
            return self._ident(s.name, expected)
        if isinstance(s, SAnti):
            return self._antiquote(s)
        if isinstance(s, SCoerce):
            return self.elab(s.inner, INTEGER)
        if isinstance(s, SAscribe):
            return self.elab(s.inner, s.ty)
        if isinstance(s, SApp):
            return self._application(s.fn, s.args, expected)
        if isinstance(s, SBin):
            return self._binary(s, expected)
        if isinstance(s, SUn):
            if s.op == "-":
                return self.apply_const("neg", fun_ty(INTEGER, INTEGER), [s.operand], expected)
            return self.apply_const("~", NOT.ty, [s.operand], expected)
        if isinstance(s, SBinder):
            return self._binder(s, expected)
        if isinstance(s, SList):
            return self._list(s, expected)
        if isinstance(s, SSection):
            return self._section(s.op, expected)
        self.fail(f"unsupported syntax {s!r}")

    def _ident(self, name: str, expected: Optional[HolType]) -> Term:
        for scope in reversed(self.scopes):
            cell = scope.get(name)
            if cell is None:
                continue
            if cell.ty is None:
                if expected is None:
                    raise _NeedsType(name)
                cell.ty = expected
            return cell.var()
        bound = self.env.lookup(name)
        if bound is not None:
            return bound
        if name in ("true", "false"):
            return self.registry.mk_const("T" if name == "true" else "F")
        if self.registry.is_constant(name):
            generic = self.registry.const_type(name)
            if expected is not None:
                return self.instance(name, expected)
            return Const(name, _default_type_vars(generic))
        self.fail(f"unbound identifier {name}")

    def _antiquote(self, s: SAnti) -> Term:
        term = self.env.antiquotes.get(s.name)
        if term is None:
            self.fail(f"unbound anti-quotation variable {s.name}")
        if s.ty is not None and term.ty != s.ty:
            self.fail(
                f"anti-quotation {s.name} has type {type_to_string(term.ty)}, "
                f"not {type_to_string(s.ty)}"
            )
        return term

    def _is_local_constant(self, s: Surface) -> Optional[str]:
        if not isinstance(s, SIdent):
            return None
        if any(s.name in scope for scope in self.scopes) or self.env.lookup(s.name) is not None:
            return None
        return s.name if self.registry.is_constant(s.name) else None

    def _application(self, fn: Surface, args: Sequence[Surface], expected: Optional[HolType]) -> Term:
        if isinstance(fn, SApp):
            # f(a)(b) and juxtaposition spines
            return self._application(fn.fn, list(fn.args) + list(args), expected)
        name = self._is_local_constant(fn)
        if name is not None:
            return self.apply_const(name, self.registry.const_type(name), args, expected)
        if isinstance(fn, SSection):
            return self._binary_section_apply(fn.op, args, expected)
        head = self.elab(fn, None)
        for arg in args:
            if not is_fun(head.ty):
                self.fail("too many arguments in application")
            dom, _ = dest_fun(head.ty)
            head = self._mk_app(head, self.elab(arg, dom))
        return head

    def _mk_app(self, fn: Term, arg: Term) -> Term:
        try:
            return App(fn, arg)
        except KernelError as exc:
            self.fail(f"type inference failure: {exc.message}")

    def apply_const(
        self,
        name: str,
        generic: HolType,
        args: Sequence[Surface],
        expected: Optional[HolType],
    ) -> Term:
        """Elaborate `name(args)` against the generic type of the constant.

        Arguments whose expected type is already fixed are checked; the rest
        are inferred and matched. Untyped bound variables that cannot be
        inferred are retried once the other arguments fixed the type
        variables; anything still open defaults to integer.
        """
        generic = _freshen(generic)
        doms: List[HolType] = []
        cod = generic
        for _ in args:
            if not is_fun(cod):
                self.fail(f"too many arguments for {name}")
            dom, cod = dest_fun(cod)
            doms.append(dom)
        theta: Dict[TyVar, HolType] = {}
        if expected is not None:
            matched = type_match(cod, expected, theta)
            if matched is None:
                self.fail(
                    f"{name} returns {type_to_string(_settle(cod))}, "
                    f"but {type_to_string(expected)} is expected"
                )
            theta = matched
        elaborated: List[Optional[Term]] = [None] * len(args)
        deferred: List[int] = []
        for i, (arg, dom) in enumerate(zip(args, doms)):
            want = type_subst(theta, dom)
            if not _open_vars(want):
                elaborated[i] = self.elab(arg, want)
                continue
            try:
                term = self.elab(arg, None)
            except _NeedsType:
                deferred.append(i)
                continue
            matched = type_match(dom, term.ty, theta)
            if matched is None:
                self.fail(
                    f"argument {i + 1} of {name} has type {type_to_string(term.ty)}, "
                    f"expected {type_to_string(_settle(want))}"
                )
            theta = matched
            elaborated[i] = term
        for i in deferred:
            for tv in _open_vars(type_subst(theta, doms[i])):
                theta[tv] = INTEGER
            elaborated[i] = self.elab(args[i], type_subst(theta, doms[i]))
        head: Term = self.instance(name, _settle(type_subst(theta, generic)))
        for term in elaborated:
            head = self._mk_app(head, term)
        return head

    def _binary(self, s: SBin, expected: Optional[HolType]) -> Term:
        op = s.op
        args = [s.left, s.right]
        if op in ("+", "-", "*", "/", "%", "EXP"):
            return self.apply_const(op, _ARITH, args, expected)
        if op in ("<", "<=", ">", ">="):
            return self.apply_const(op, _CMP, args, expected)
        if op in ("||", "==>"):
            return self.apply_const(op, _BOOL_BIN, args, expected)
        if op == "<=>":
            return self.apply_const("=", _BOOL_BIN, args, expected)
        if op in ("**", "|--", "-|-"):
            return self.apply_const(op, self.generic_type(op), args, expected)
        if op in ("==", "=", "!="):
            return self._equality(op, args, expected)
        if op == "&&":
            return self._conjunction(args, expected)
        self.fail(f"unknown operator {op}")

    def _equality(self, op: str, args: List[Surface], expected: Optional[HolType]) -> Term:
        eq = self.apply_const("=", _POLY_EQ, args, BOOL)
        left, right = eq.fn.arg, eq.arg
        if left.ty == HPROP:
            eq = mk_binop(BIENTAIL, left, right)
        if op == "!=":
            eq = App(NOT, eq)
        return eq

    def _operand_type(self, args: Sequence[Surface]) -> Optional[HolType]:
        for arg in args:
            try:
                return self.elab(arg, None).ty
            except _NeedsType:
                continue
        return None

    def _conjunction(self, args: List[Surface], expected: Optional[HolType]) -> Term:
        ty = expected if expected in (BOOL, HPROP) else self._operand_type(args)
        if ty == HPROP:
            return self.apply_const("hand", self.generic_type("hand"), args, expected)
        return self.apply_const("&&", _BOOL_BIN, args, expected)

    def _binder(self, s: SBinder, expected: Optional[HolType]) -> Term:
        cells = [_Pending(name, ty) for name, ty in s.bvars]
        if s.kind == "lambda":
            body_expected = expected
            for cell in cells:
                if body_expected is not None and is_fun(body_expected):
                    dom, body_expected = dest_fun(body_expected)
                    if cell.ty is None:
                        cell.ty = dom
                else:
                    body_expected = None
        elif s.kind == "forall":
            body_expected = BOOL
        else:
            body_expected = expected if expected in (BOOL, HPROP) else None
        self.scopes.append({cell.name: cell for cell in cells})
        try:
            body = self.elab(s.body, body_expected)
        finally:
            self.scopes.pop()
        if s.kind == "exists" and body.ty not in (BOOL, HPROP):
            self.fail(f"existential body has type {type_to_string(body.ty)}")
        for cell in reversed(cells):
            if cell.ty is None:
                cell.ty = INTEGER
            v = cell.var()
            if s.kind == "lambda":
                body = Abs(v, body)
            elif s.kind == "forall":
                body = App(binder_const("!", v.ty), Abs(v, body))
            else:
                binder = "hexists" if body.ty == HPROP else "?"
                body = App(binder_const(binder, v.ty), Abs(v, body))
        return body

    def _list(self, s: SList, expected: Optional[HolType]) -> Term:
        if expected is not None and isinstance(expected, TyApp) and expected.name == "list":
            elem = expected.args[0]
        else:
            elem = self._operand_type(s.items) or INTEGER
        ty = list_ty(elem)
        result: Term = self.instance("nil", ty)
        cons = self.instance("cons", fun_ty(elem, fun_ty(ty, ty)))
        for item in reversed(s.items):
            result = self._mk_app(self._mk_app(cons, self.elab(item, elem)), result)
        return result

    def _section(self, op: str, expected: Optional[HolType]) -> Term:
        dom = None
        if expected is not None and is_fun(expected):
            dom = dest_fun(expected)[0]
        if op in ("+", "-", "*", "/", "%", "EXP"):
            return Const(op, _ARITH)
        if op in ("<", "<=", ">", ">="):
            return Const(op, _CMP)
        if op in ("||", "==>"):
            return Const(op, _BOOL_BIN)
        if op == "<=>":
            return Const("=", _BOOL_BIN)
        if op in ("**", "|--", "-|-"):
            return self.instance(op, self.generic_type(op))
        if op == "~":
            return NOT
        if op == "&&":
            if dom == HPROP:
                return self.instance("hand", self.generic_type("hand"))
            return Const("&&", _BOOL_BIN)
        if op in ("==", "="):
            ty = dom or INTEGER
            if ty == HPROP:
                return BIENTAIL
            return Const("=", fun_ty(ty, fun_ty(ty, BOOL)))
        if op in ("forall", "exists"):
            var_ty, body_ty = INTEGER, BOOL
            if dom is not None and is_fun(dom):
                var_ty, body_ty = dest_fun(dom)
            if op == "forall":
                return binder_const("!", var_ty)
            return binder_const("hexists" if body_ty == HPROP else "?", var_ty)
        self.fail(f"operator {op} has no section")

    def _binary_section_apply(self, op: str, args: Sequence[Surface], expected: Optional[HolType]) -> Term:
        if op in INFIX and len(args) == 2:
            return self._binary(SBin(op, args[0], args[1]), expected)
        head = self._section(op, None)
        for arg in args:
            if not is_fun(head.ty):
                self.fail("too many arguments in application")
            head = self._mk_app(head, self.elab(arg, dest_fun(head.ty)[0]))
        return head


def _default_type_vars(ty: HolType) -> HolType:
    return type_subst({tv: INTEGER for tv in type_vars(ty)}, ty)


# Type variables of a constant's generic type are renamed apart from the
# rigid type variables written by the user; "?" cannot appear in source.
def _freshen(ty: HolType) -> HolType:
    return type_subst({tv: TyVar("?" + tv.name) for tv in type_vars(ty)}, ty)


def _open_vars(ty: HolType):
    return {tv for tv in type_vars(ty) if tv.name.startswith("?")}


def _settle(ty: HolType) -> HolType:
    """Default the still-open type variables to integer."""
    return type_subst({tv: INTEGER for tv in _open_vars(ty)}, ty)


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------


def parse_surface(source: str, registry: Optional[Registry] = None) -> Surface:
    return _Parser(source, registry).parse_all()


def parse_term(source: str, env: SyntaxEnv, expected: Optional[HolType] = None) -> Term:
    """Parse and elaborate a quotation body.

    Args:
        source (str): Quotation text without the surrounding backticks
        env (SyntaxEnv): Variables, anti-quotations and constants in scope
        expected (HolType, optional): Type the term is checked against

    Returns:
        Term: A well-typed kernel term
    """
    surface = _Parser(source, env.registry).parse_all()
    elaborator = _Elaborator(env, source)
    try:
        return elaborator.elab(surface, expected)
    except _NeedsType as exc:
        raise QuoteError(f"cannot infer the type of {exc.name} in `{source}`") from None


def parse_hprop(source: str, env: SyntaxEnv) -> Term:
    """Parse a quotation that must denote a heap proposition."""
    term = parse_term(source, env)
    if term.ty != HPROP:
        raise QuoteError(
            f"quotation has type {type_to_string(term.ty)} where hprop is expected: `{source}`"
        )
    return term


def parse_bool(source: str, env: SyntaxEnv) -> Term:
    term = parse_term(source, env)
    if term.ty != BOOL:
        raise QuoteError(
            f"quotation has type {type_to_string(term.ty)} where bool is expected: `{source}`"
        )
    return term

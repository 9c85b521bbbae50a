"""
CStar - C Syntax Trees

Syntax trees for the supported C subset and for proof code, which share
expressions and most statements. Attribute payloads are kept as raw text;
they are evaluated later, in the scope where they apply.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from cstar.seplogic.ctypes_info import C_SPELLINGS

# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CType:
    """A C type: base spelling plus pointer depth (`char *` is CType("char", 1))."""

    base: str
    pointers: int = 0
    array: bool = False

    @property
    def is_pointer(self) -> bool:
        return self.pointers > 0

    @property
    def is_void(self) -> bool:
        return self.base == "void" and self.pointers == 0

    def pointee(self) -> "CType":
        return CType(self.base, self.pointers - 1)

    def pointer_to(self) -> "CType":
        return CType(self.base, self.pointers + 1)

    def logic_name(self) -> Optional[str]:
        """Name of the ctype constant for values of this type, if it has one."""
        if self.pointers:
            return "Tptr"
        return C_SPELLINGS.get(self.base)

    def __str__(self) -> str:
        return self.base + " " + "*" * self.pointers if self.pointers else self.base


INT = CType("int")
CHAR = CType("char")
VOID = CType("void")

# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntLit:
    value: int
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CharLit:
    value: int
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class StrLit:
    value: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class QuoteLit:
    """A backtick quotation; text excludes the backticks."""

    text: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Name:
    id: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Cast:
    ty: CType
    operand: "Expr"
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Index:
    base: "Expr"
    index: "Expr"
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    """A call; ghost holds raw `[[argument]]` payloads attached to the statement."""

    fn: str
    args: Tuple["Expr", ...]
    ghost: Tuple[str, ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SizeOf:
    ty: CType
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class InitList:
    items: Tuple["Expr", ...]
    line: int = field(default=0, compare=False)


Expr = Union[IntLit, CharLit, StrLit, QuoteLit, Name, Unary, Binary, Cast, Index, Call, SizeOf, InitList]

# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Decl:
    ty: CType
    name: str
    init: Optional[Expr] = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Assign:
    """`target = value`; target is a Name, a dereference or an Index."""

    target: Expr
    value: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ExprStmt:
    expr: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class If:
    cond: Expr
    then: Tuple["Stmt", ...]
    orelse: Optional[Tuple["Stmt", ...]] = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class While:
    cond: Expr
    invariant: Optional[str]
    body: Tuple["Stmt", ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Block:
    body: Tuple["Stmt", ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Break:
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Continue:
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Return:
    value: Optional[Expr] = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Assert:
    payload: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ProofBlock:
    """Raw proof code; line is the line the code starts on."""

    text: str
    file: Optional[str] = field(default=None, compare=False)
    line: int = field(default=0, compare=False)


Stmt = Union[Decl, Assign, ExprStmt, If, While, Block, Break, Continue, Return, Assert, ProofBlock]

# ---------------------------------------------------------------------------
# Top level
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Param:
    name: str
    ty: CType


@dataclass(frozen=True)
class FuncDef:
    """A function definition (body is not None) or an external declaration.

    ghosts holds raw `[[parameter]]` payloads of the form `name:type`.
    """

    name: str
    params: Tuple[Param, ...]
    ret: CType
    require: str = "`emp`"
    ensure: str = "`emp`"
    ghosts: Tuple[str, ...] = ()
    body: Optional[Tuple[Stmt, ...]] = None
    file: Optional[str] = field(default=None, compare=False)
    line: int = field(default=0, compare=False)

    @property
    def is_definition(self) -> bool:
        return self.body is not None


@dataclass(frozen=True)
class GlobalVar:
    name: str
    ty: CType
    init: Optional[Expr] = None
    line: int = field(default=0, compare=False)


TopLevel = Union[FuncDef, GlobalVar, ProofBlock]


@dataclass(frozen=True)
class CProgram:
    items: Tuple[TopLevel, ...] = ()

    @property
    def functions(self) -> Tuple[FuncDef, ...]:
        return tuple(i for i in self.items if isinstance(i, FuncDef) and i.is_definition)

    @property
    def declarations(self) -> Tuple[FuncDef, ...]:
        """Every function signature: external declarations and definitions."""
        return tuple(i for i in self.items if isinstance(i, FuncDef))

    @property
    def globals(self) -> Tuple[GlobalVar, ...]:
        return tuple(i for i in self.items if isinstance(i, GlobalVar))

    @property
    def global_proofs(self) -> Tuple[ProofBlock, ...]:
        return tuple(i for i in self.items if isinstance(i, ProofBlock))

    def function(self, name: str) -> Optional[FuncDef]:
        """Signature of name, preferring the definition over a prior declaration."""
        found = None
        for item in self.declarations:
            if item.name == name and (found is None or item.is_definition):
                found = item
        return found

"""
CStar - C Parser

Recursive-descent parser for the supported C subset with verification
attributes. The expression and statement grammar lives in Parser and is
shared with the proof-language parser; CParser adds the C top level and the
`[[cstar::...]]` attributes.
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

from cstar.cfront import ast
from cstar.cfront.lexer import Token, tokenize
from cstar.cfront.preprocess import Expanded
from cstar.errors import ParseError

logger = logging.getLogger(__name__)

# Binary operators by precedence, loosest first.
BINARY_LEVELS: List[Tuple[str, ...]] = [
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*", "/", "%"),
]

UNSUPPORTED_OPERATORS = {"|", "^", "<<", ">>", "?"}
UNSUPPORTED_STATEMENTS = {"for", "do", "switch", "goto", "case", "default"}
COMPOUND_ASSIGN = {"+=": "+", "-=": "-", "*=": "*", "/=": "/", "%=": "%"}

C_BASE_WORDS = {"void", "char", "int", "short", "long", "signed", "unsigned"}
C_TYPEDEFS = {"u8": "unsigned char", "uint8_t": "unsigned char", "int32_t": "int"}
QUALIFIERS = {"const", "volatile", "static", "extern", "inline", "register"}

Origin = Callable[[int], Tuple[Optional[str], Optional[int]]]


class Parser:
    """Expressions and statements over a token list."""

    base_words = C_BASE_WORDS
    typedefs: Dict[str, str] = C_TYPEDEFS

    def __init__(self, tokens: List[Token], file: Optional[str] = None,
                 origin: Optional[Origin] = None):
        self.toks = tokens
        self.i = 0
        self.file = file
        self.origin = origin or (lambda line: (file, line))

    # -- token helpers ----------------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def advance(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def at(self, text: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok.kind in ("OP", "IDENT") and tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected '{text}' but found {self.describe(self.peek())}")
        return self.advance()

    def ident(self) -> Token:
        tok = self.peek()
        if tok.kind != "IDENT":
            self.fail(f"expected an identifier but found {self.describe(tok)}")
        return self.advance()

    @staticmethod
    def describe(tok: Token) -> str:
        if tok.kind == "EOF":
            return "end of input"
        if tok.kind == "ATTR":
            return f"attribute {tok.text}"
        return f"'{tok.text}'"

    def line_of(self, tok: Optional[Token] = None) -> int:
        tok = tok or self.peek()
        return self.origin(tok.line)[1] or tok.line

    def file_of(self, tok: Optional[Token] = None) -> Optional[str]:
        tok = tok or self.peek()
        return self.origin(tok.line)[0] or self.file

    def fail(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        file, line = self.origin(tok.line)
        raise ParseError(message, file or self.file, line or tok.line)

    # -- types --------------------------------------------------------------------

    def is_type_start(self, offset: int = 0) -> bool:
        tok = self.peek(offset)
        if tok.kind != "IDENT":
            return False
        return (tok.text in self.base_words or tok.text in self.typedefs
                or tok.text == "struct" or tok.text in QUALIFIERS)

    def parse_base_type(self) -> str:
        words: List[str] = []
        while True:
            tok = self.peek()
            if tok.kind != "IDENT":
                break
            if tok.text in QUALIFIERS:
                self.advance()
            elif tok.text == "struct":
                self.advance()
                return f"struct {self.ident().text}"
            elif tok.text in self.typedefs and not words:
                self.advance()
                return self.typedefs[tok.text]
            elif tok.text in self.base_words:
                words.append(self.advance().text)
            else:
                break
        if not words:
            self.fail(f"expected a type but found {self.describe(self.peek())}")
        return _normalize_spelling(words)

    def parse_pointers(self) -> int:
        depth = 0
        while self.at("*") or self.at("const"):
            if self.advance().text == "*":
                depth += 1
        return depth

    def parse_type_name(self) -> ast.CType:
        base = self.parse_base_type()
        return ast.CType(base, self.parse_pointers())

    # -- expressions -----------------------------------------------------------------

    def parse_expr(self) -> ast.Expr:
        return self.parse_binary(0)

    def parse_binary(self, level: int) -> ast.Expr:
        if level == len(BINARY_LEVELS):
            return self.parse_unary()
        left = self.parse_binary(level + 1)
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.text in BINARY_LEVELS[level]:
                self.advance()
                right = self.parse_binary(level + 1)
                left = ast.Binary(tok.text, left, right, self.line_of(tok))
            elif tok.kind == "OP" and tok.text in UNSUPPORTED_OPERATORS:
                self.fail(f"unsupported operator '{tok.text}'")
            else:
                return left

    def parse_unary(self) -> ast.Expr:
        tok = self.peek()
        if tok.kind == "OP" and tok.text in ("-", "!", "&", "*", "+", "~"):
            self.advance()
            operand = self.parse_unary()
            if tok.text == "+":
                return operand
            if tok.text == "~":
                self.fail("unsupported operator '~'", tok)
            return ast.Unary(tok.text, operand, self.line_of(tok))
        if tok.kind == "OP" and tok.text in ("++", "--"):
            self.fail("increment and decrement are only supported as statements", tok)
        if self.at("(") and self.is_type_start(1):
            self.advance()
            ty = self.parse_type_name()
            self.expect(")")
            return ast.Cast(ty, self.parse_unary(), self.line_of(tok))
        if self.at("sizeof"):
            self.advance()
            self.expect("(")
            ty = self.parse_type_name()
            self.expect(")")
            return ast.SizeOf(ty, self.line_of(tok))
        return self.parse_postfix(self.parse_primary())

    def parse_postfix(self, expr: ast.Expr) -> ast.Expr:
        while True:
            tok = self.peek()
            if self.at("("):
                if not isinstance(expr, ast.Name):
                    self.fail("only named functions can be called")
                self.advance()
                args: List[ast.Expr] = []
                if not self.at(")"):
                    args.append(self.parse_expr())
                    while self.accept(","):
                        args.append(self.parse_expr())
                self.expect(")")
                expr = ast.Call(expr.id, tuple(args), (), self.line_of(tok))
            elif self.at("["):
                self.advance()
                index = self.parse_expr()
                self.expect("]")
                expr = ast.Index(expr, index, self.line_of(tok))
            elif self.at("->") or self.at("."):
                self.fail("field access is not supported")
            else:
                return expr

    def parse_primary(self) -> ast.Expr:
        tok = self.advance()
        line = self.line_of(tok)
        if tok.kind == "NUMBER":
            return ast.IntLit(int(tok.text), line)
        if tok.kind == "CHAR":
            return ast.CharLit(int(tok.text), line)
        if tok.kind == "STRING":
            return ast.StrLit(tok.text, line)
        if tok.kind == "QUOTE":
            return ast.QuoteLit(tok.text, line)
        if tok.kind == "IDENT":
            return ast.Name(tok.text, line)
        if tok.kind == "OP" and tok.text == "(":
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if tok.kind == "OP" and tok.text == "{":
            items: List[ast.Expr] = []
            while not self.at("}"):
                items.append(self.parse_expr())
                if not self.accept(","):
                    break
            self.expect("}")
            return ast.InitList(tuple(items), line)
        self.fail(f"unexpected {self.describe(tok)} in expression", tok)

    # -- statements -------------------------------------------------------------------

    def parse_block_body(self) -> Tuple[ast.Stmt, ...]:
        """Statements up to the closing brace (the opening brace is consumed)."""
        body: List[ast.Stmt] = []
        while not self.at("}"):
            if self.peek().kind == "EOF":
                self.fail("missing '}'")
            body.extend(self.parse_statement())
        self.expect("}")
        return tuple(body)

    def parse_branch(self) -> Tuple[ast.Stmt, ...]:
        if self.accept("{"):
            return self.parse_block_body()
        return tuple(self.parse_statement())

    def parse_statement(self) -> List[ast.Stmt]:
        tok = self.peek()
        line = self.line_of(tok)
        if tok.kind == "IDENT" and tok.text in UNSUPPORTED_STATEMENTS:
            self.fail(f"unsupported statement: {tok.text}")
        if self.accept(";"):
            return []
        if self.accept("{"):
            return [ast.Block(self.parse_block_body(), line)]
        if self.accept("if"):
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            then = self.parse_branch()
            orelse = self.parse_branch() if self.accept("else") else None
            return [ast.If(cond, then, orelse, line)]
        if self.at("while"):
            return [self.parse_while(None)]
        if self.accept("break"):
            self.expect(";")
            return [ast.Break(line)]
        if self.accept("continue"):
            self.expect(";")
            return [ast.Continue(line)]
        if self.accept("return"):
            value = None if self.at(";") else self.parse_expr()
            self.expect(";")
            return [ast.Return(value, line)]
        if self.is_type_start():
            return self.parse_local_declaration()
        return [self.parse_simple_statement()]

    def parse_while(self, invariant: Optional[str]) -> ast.While:
        tok = self.expect("while")
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        invariant = self.parse_loop_attributes(invariant)
        body = self.parse_branch()
        return ast.While(cond, invariant, body, self.line_of(tok))

    def parse_loop_attributes(self, invariant: Optional[str]) -> Optional[str]:
        return invariant

    def parse_local_declaration(self) -> List[ast.Stmt]:
        base = self.parse_base_type()
        decls: List[ast.Stmt] = []
        while True:
            tok = self.peek()
            ty = ast.CType(base, self.parse_pointers())
            name = self.ident().text
            if self.accept("["):
                if not self.at("]"):
                    self.parse_expr()
                self.expect("]")
                ty = ast.CType(ty.base, ty.pointers, array=True)
            init = self.parse_expr() if self.accept("=") else None
            decls.append(ast.Decl(ty, name, init, self.line_of(tok)))
            if not self.accept(","):
                break
        self.expect(";")
        return decls

    def parse_simple_statement(self) -> ast.Stmt:
        tok = self.peek()
        line = self.line_of(tok)
        target = self.parse_expr()
        op = self.peek()
        if op.kind == "OP" and op.text == "=":
            self.advance()
            value = self.parse_expr()
            stmt: ast.Stmt = ast.Assign(target, value, line)
        elif op.kind == "OP" and op.text in COMPOUND_ASSIGN:
            self.advance()
            value = ast.Binary(COMPOUND_ASSIGN[op.text], target, self.parse_expr(), line)
            stmt = ast.Assign(target, value, line)
        elif op.kind == "OP" and op.text in ("++", "--"):
            self.advance()
            value = ast.Binary("+" if op.text == "++" else "-", target, ast.IntLit(1, line), line)
            stmt = ast.Assign(target, value, line)
        else:
            stmt = ast.ExprStmt(target, line)
        self.expect(";")
        if isinstance(stmt, ast.Assign) and not _is_lvalue(stmt.target):
            self.fail("left side of assignment is not assignable", tok)
        return stmt


def _is_lvalue(expr: ast.Expr) -> bool:
    if isinstance(expr, ast.Name) or isinstance(expr, ast.Index):
        return True
    return isinstance(expr, ast.Unary) and expr.op == "*"


def _normalize_spelling(words: Sequence[str]) -> str:
    words = [w for w in words if w != "signed"] or ["int"]
    if words == ["unsigned"]:
        return "unsigned int"
    return " ".join(words)


# ---------------------------------------------------------------------------
# C translation units
# ---------------------------------------------------------------------------

FUNCTION_ATTRIBUTES = ("require", "ensure", "parameter")
STATEMENT_ATTRIBUTES = ("assert", "proof", "argument", "invariant")


class CParser(Parser):
    """Top level of a translation unit plus verification attributes."""

    def __init__(self, tokens: List[Token], file: Optional[str] = None,
                 origin: Optional[Origin] = None):
        super().__init__(tokens, file, origin)
        # ids of signatures that carried their own spec attributes
        self.explicit: Set[int] = set()

    def parse_program(self) -> ast.CProgram:
        items: List[ast.TopLevel] = []
        while self.peek().kind != "EOF":
            items.extend(self.parse_top_level())
        return ast.CProgram(tuple(_merge_prototypes(items, self)))

    # -- attributes -----------------------------------------------------------------

    def attributes(self) -> List[Token]:
        found: List[Token] = []
        while self.peek().kind in ("ATTR", "PROOF"):
            found.append(self.advance())
        return found

    def _proof_block(self, tok: Token) -> ast.ProofBlock:
        file, line = self.origin(tok.payload_line or tok.line)
        return ast.ProofBlock(tok.value[1] or "", file or self.file, line or tok.line)

    def _payload(self, tok: Token) -> str:
        name, payload = tok.value
        if payload is None or not payload.strip():
            self.fail(f"attribute {name} requires an argument", tok)
        return payload.strip()

    @staticmethod
    def _name(tok: Token) -> str:
        return tok.value[0] if tok.kind == "ATTR" else "proof"

    # -- top level ------------------------------------------------------------------

    def parse_top_level(self) -> List[ast.TopLevel]:
        leading = self.attributes()
        items: List[ast.TopLevel] = []
        pending: List[Token] = []
        for tok in leading:
            if self._name(tok) == "proof":
                items.append(self._proof_block(tok))
            else:
                pending.append(tok)
        if not pending and self.accept(";"):
            return items
        if not pending and self.peek().kind in ("EOF", "ATTR", "PROOF"):
            return items
        items.extend(self.parse_external_declaration(pending))
        return items

    def parse_external_declaration(self, leading: List[Token]) -> List[ast.TopLevel]:
        base = self.parse_base_type()
        ty = ast.CType(base, self.parse_pointers())
        name_tok = self.ident()
        if self.at("("):
            return [self.parse_function(ty, name_tok, leading)]
        if leading:
            self.fail(f"attribute {leading[0].text} does not apply to a variable", leading[0])
        globals_: List[ast.TopLevel] = []
        while True:
            if self.accept("["):
                if not self.at("]"):
                    self.parse_expr()
                self.expect("]")
                ty = ast.CType(ty.base, ty.pointers, array=True)
            init = self.parse_expr() if self.accept("=") else None
            globals_.append(ast.GlobalVar(name_tok.text, ty, init, self.line_of(name_tok)))
            if not self.accept(","):
                break
            ty = ast.CType(base, self.parse_pointers())
            name_tok = self.ident()
        self.expect(";")
        return globals_

    def parse_params(self) -> Tuple[ast.Param, ...]:
        self.expect("(")
        params: List[ast.Param] = []
        if self.at("void") and self.at(")", 1):
            self.advance()
        while not self.at(")"):
            ty = self.parse_type_name()
            name = self.ident().text
            if self.accept("["):
                self.expect("]")
                ty = ty.pointer_to()
            params.append(ast.Param(name, ty))
            if not self.accept(","):
                break
        self.expect(")")
        return tuple(params)

    def parse_function(self, ret: ast.CType, name_tok: Token, leading: List[Token]) -> ast.FuncDef:
        params = self.parse_params()
        spec: Dict[str, Optional[str]] = {"require": None, "ensure": None}
        ghosts: List[str] = []
        for tok in leading + self.attributes():
            kind = self._name(tok)
            if kind in ("require", "ensure"):
                if spec[kind] is not None:
                    self.fail(f"duplicate {kind} attribute", tok)
                spec[kind] = self._payload(tok)
            elif kind == "parameter":
                ghosts.append(self._payload(tok))
            elif "::" in kind:
                continue
            else:
                self.fail(f"attribute {kind} does not apply to a function", tok)
        body = None
        if not self.accept(";"):
            self.expect("{")
            body = self.parse_block_body()
        func = ast.FuncDef(
            name=name_tok.text,
            params=params,
            ret=ret,
            require=spec["require"] or "`emp`",
            ensure=spec["ensure"] or "`emp`",
            ghosts=tuple(ghosts),
            body=body,
            file=self.file_of(name_tok),
            line=self.line_of(name_tok),
        )
        if spec["require"] is not None or spec["ensure"] is not None or ghosts:
            self.explicit.add(id(func))
        return func

    # -- statements with attributes ---------------------------------------------------

    def parse_statement(self) -> List[ast.Stmt]:
        attrs = self.attributes()
        if not attrs:
            return super().parse_statement()
        out: List[ast.Stmt] = []
        arguments: List[str] = []
        invariant: Optional[str] = None
        for tok in attrs:
            kind = self._name(tok)
            if kind == "proof":
                out.append(self._proof_block(tok))
            elif kind == "assert":
                out.append(ast.Assert(self._payload(tok), self.line_of(tok)))
            elif kind == "argument":
                arguments.append(self._payload(tok))
            elif kind == "invariant":
                invariant = self._payload(tok)
            elif "::" in kind:
                continue
            else:
                self.fail(f"attribute {kind} does not apply to a statement", tok)
        if invariant is not None:
            if not self.at("while"):
                self.fail("invariant attribute must annotate a while loop")
            out.append(self.parse_while(invariant))
            return out
        if arguments:
            stmts = super().parse_statement()
            if len(stmts) != 1:
                self.fail("argument attributes must annotate a single call statement")
            out.append(_attach_ghost_arguments(stmts[0], tuple(arguments), self))
            return out
        # a bare attribute statement may be followed by an empty statement
        self.accept(";")
        return out

    def parse_while(self, invariant: Optional[str]) -> ast.While:
        loop = super().parse_while(invariant)
        if loop.invariant is None:
            raise ParseError("while loop requires an invariant attribute", self.file_of(),
                             loop.line)
        return loop

    def parse_loop_attributes(self, invariant: Optional[str]) -> Optional[str]:
        for tok in self.attributes():
            kind = self._name(tok)
            if kind == "invariant":
                if invariant is not None:
                    self.fail("duplicate invariant attribute", tok)
                invariant = self._payload(tok)
            elif "::" not in kind:
                self.fail(f"attribute {kind} does not apply to a loop", tok)
        return invariant


def _merge_prototypes(items: List[ast.TopLevel], parser: "CParser") -> List[ast.TopLevel]:
    """Let a definition without spec attributes inherit its prototype's spec."""
    seen: Dict[str, ast.FuncDef] = {}
    defined: Dict[str, ast.FuncDef] = {}
    names: Dict[str, str] = {}
    out: List[ast.TopLevel] = []
    for item in items:
        if isinstance(item, ast.GlobalVar):
            if item.name in names:
                raise ParseError(f"duplicate name {item.name}", parser.file, item.line)
            names[item.name] = "variable"
        if isinstance(item, ast.FuncDef):
            if names.get(item.name) == "variable":
                raise ParseError(f"duplicate name {item.name}", item.file, item.line)
            names[item.name] = "function"
            if item.is_definition:
                if item.name in defined:
                    raise ParseError(f"duplicate definition of {item.name}", item.file, item.line)
                defined[item.name] = item
                proto = seen.get(item.name)
                if proto is not None and not id(item) in parser.explicit:
                    item = ast.FuncDef(item.name, item.params, item.ret, proto.require,
                                       proto.ensure, proto.ghosts, item.body, item.file,
                                       item.line)
            else:
                seen[item.name] = item
        out.append(item)
    return out


def _attach_ghost_arguments(stmt: ast.Stmt, ghost: Tuple[str, ...], parser: Parser) -> ast.Stmt:
    def attach(expr: Optional[ast.Expr]) -> Optional[ast.Expr]:
        if isinstance(expr, ast.Call):
            return ast.Call(expr.fn, expr.args, ghost, expr.line)
        parser.fail("argument attributes must annotate a call")

    if isinstance(stmt, ast.ExprStmt):
        return ast.ExprStmt(attach(stmt.expr), stmt.line)
    if isinstance(stmt, ast.Assign):
        return ast.Assign(stmt.target, attach(stmt.value), stmt.line)
    if isinstance(stmt, ast.Decl):
        return ast.Decl(stmt.ty, stmt.name, attach(stmt.init), stmt.line)
    if isinstance(stmt, ast.Return):
        return ast.Return(attach(stmt.value), stmt.line)
    parser.fail("argument attributes must annotate a call")


def parse_program(source: str, file: Optional[str] = None,
                  expanded: Optional[Expanded] = None) -> ast.CProgram:
    """Parse a (preprocessed) translation unit.

    Args:
        source (str): Source text, already include-expanded
        file (str, optional): Name used in diagnostics
        expanded (Expanded, optional): Origin map of the expanded text

    Returns:
        CProgram: The syntax tree, with attribute payloads as raw text
    """
    origin: Origin = expanded.origin if expanded is not None else (lambda line: (file, line))
    tokens = tokenize(source, file)
    program = CParser(tokens, file, origin).parse_program()
    logger.debug(
        f"parsed {len(program.functions)} functions, {len(program.global_proofs)} global proof blocks"
    )
    return program

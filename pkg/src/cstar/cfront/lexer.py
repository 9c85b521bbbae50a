"""
CStar - C Lexer

Tokenizer shared by the C frontend and the proof-language parser. Besides the
usual C tokens it recognises backtick quotations, `[[ns::name(payload)]]`
attributes (payload kept verbatim) and «...» proof blocks.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

from cstar.errors import ParseError

OPERATORS = [
    "<<=", ">>=", "...",
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "+", "-", "*", "/", "%", "<", ">", "=", "!", "&", "|", "^", "~", "?", ":",
    ";", ",", ".", "(", ")", "{", "}", "[", "]",
]

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "0": "\0", "\\": "\\", "'": "'", '"': '"'}


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, NUMBER, CHAR, STRING, QUOTE, OP, ATTR, PROOF, EOF
    text: str
    line: int
    col: int
    # ATTR: (name, payload); PROOF: proof text
    value: Optional[Tuple[str, Optional[str]]] = None
    # line the payload or proof text starts on
    payload_line: int = 0


class Lexer:
    def __init__(self, source: str, file: Optional[str] = None, first_line: int = 1):
        self.src = source
        self.file = file
        self.pos = 0
        self.line = first_line
        self.col = 1

    def error(self, message: str, line: Optional[int] = None) -> ParseError:
        return ParseError(message, self.file, line or self.line)

    # -- low level ------------------------------------------------------------

    def _peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.src[i] if i < len(self.src) else ""

    def _advance(self, count: int = 1) -> str:
        text = self.src[self.pos:self.pos + count]
        for ch in text:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += count
        return text

    def _skip_trivia(self) -> None:
        while self.pos < len(self.src):
            ch = self._peek()
            if ch.isspace():
                self._advance()
            elif self.src.startswith("//", self.pos):
                while self.pos < len(self.src) and self._peek() != "\n":
                    self._advance()
            elif self.src.startswith("/*", self.pos):
                start = self.line
                end = self.src.find("*/", self.pos + 2)
                if end < 0:
                    raise self.error("unterminated comment", start)
                self._advance(end + 2 - self.pos)
            else:
                return

    def _skip_delimited(self, close: str, what: str) -> None:
        """Advance past a string, char or quotation literal (opening char consumed)."""
        start = self.line
        while self.pos < len(self.src):
            ch = self._advance()
            if ch == "\\" and close != "`":
                self._advance()
            elif ch == close:
                return
        raise self.error(f"unterminated {what}", start)

    def _balanced(self) -> str:
        """Raw text up to the parenthesis closing the one just consumed."""
        start_pos, start_line = self.pos, self.line
        depth = 1
        while self.pos < len(self.src):
            if self.src.startswith("//", self.pos) or self.src.startswith("/*", self.pos):
                self._skip_trivia()
                continue
            ch = self._advance()
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    return self.src[start_pos:self.pos - 1]
            elif ch == "`":
                self._skip_delimited("`", "quotation")
            elif ch == '"':
                self._skip_delimited('"', "string literal")
            elif ch == "'":
                self._skip_delimited("'", "character literal")
        raise self.error("unbalanced parentheses in attribute", start_line)

    # -- tokens ---------------------------------------------------------------

    def tokens(self) -> List[Token]:
        out: List[Token] = []
        while True:
            self._skip_trivia()
            if self.pos >= len(self.src):
                out.append(Token("EOF", "", self.line, self.col))
                return out
            if self.src.startswith("[[", self.pos):
                out.extend(self._attributes())
            else:
                out.append(self._token())

    def _token(self) -> Token:
        line, col = self.line, self.col
        ch = self._peek()
        if ch.isalpha() or ch == "_":
            start = self.pos
            while self._peek().isalnum() or self._peek() == "_":
                self._advance()
            return Token("IDENT", self.src[start:self.pos], line, col)
        if ch.isdigit():
            return self._number(line, col)
        if ch == "'":
            self._advance()
            start = self.pos
            self._skip_delimited("'", "character literal")
            body = self.src[start:self.pos - 1]
            return Token("CHAR", str(_char_value(body, self, line)), line, col)
        if ch == '"':
            self._advance()
            start = self.pos
            self._skip_delimited('"', "string literal")
            return Token("STRING", _unescape(self.src[start:self.pos - 1]), line, col)
        if ch == "`":
            self._advance()
            start = self.pos
            self._skip_delimited("`", "quotation")
            return Token("QUOTE", self.src[start:self.pos - 1], line, col, payload_line=line)
        if ch == "«":
            self._advance()
            start, text_line = self.pos, self.line
            end = self.src.find("»", self.pos)
            if end < 0:
                raise self.error("unterminated proof block", line)
            text = self.src[start:end]
            self._advance(end + 1 - self.pos)
            return Token("PROOF", text, line, col, value=("proof", text), payload_line=text_line)
        for op in OPERATORS:
            if self.src.startswith(op, self.pos):
                self._advance(len(op))
                return Token("OP", op, line, col)
        raise self.error(f"unexpected character {ch!r}")

    def _number(self, line: int, col: int) -> Token:
        start = self.pos
        if self.src.startswith(("0x", "0X"), self.pos):
            self._advance(2)
            while self._peek() in "0123456789abcdefABCDEF" and self._peek():
                self._advance()
            value = int(self.src[start:self.pos], 16)
        else:
            while self._peek().isdigit():
                self._advance()
            value = int(self.src[start:self.pos])
        while self._peek() and self._peek() in "uUlL":
            self._advance()
        return Token("NUMBER", str(value), line, col)

    def _attributes(self) -> List[Token]:
        line, col = self.line, self.col
        self._advance(2)
        found: List[Token] = []
        while True:
            self._skip_trivia()
            if self.src.startswith("]]", self.pos):
                self._advance(2)
                return found
            if found:
                if self._peek() != ",":
                    raise self.error("expected ',' or ']]' in attribute list")
                self._advance()
                self._skip_trivia()
            name = self._attribute_name()
            self._skip_trivia()
            payload, payload_line = None, self.line
            if self._peek() == "(":
                self._advance()
                payload_line = self.line
                payload = self._balanced()
            found.append(Token("ATTR", name, line, col, value=(name, payload),
                               payload_line=payload_line))

    def _attribute_name(self) -> str:
        start = self.pos
        while self._peek().isalnum() or self._peek() in "_:":
            self._advance()
        name = self.src[start:self.pos]
        if not name:
            raise self.error("expected an attribute name")
        if "::" in name:
            namespace, name = name.split("::", 1)
            if namespace != "cstar":
                # foreign attributes are kept and ignored by the parser
                return f"{namespace}::{name}"
        return name


def _unescape(body: str) -> str:
    out, i = [], 0
    while i < len(body):
        if body[i] == "\\" and i + 1 < len(body):
            out.append(_ESCAPES.get(body[i + 1], body[i + 1]))
            i += 2
        else:
            out.append(body[i])
            i += 1
    return "".join(out)


def _char_value(body: str, lexer: Lexer, line: int) -> int:
    text = _unescape(body)
    if len(text) != 1:
        raise lexer.error(f"invalid character literal '{body}'", line)
    return ord(text)


def tokenize(source: str, file: Optional[str] = None, first_line: int = 1) -> List[Token]:
    return Lexer(source, file, first_line).tokens()

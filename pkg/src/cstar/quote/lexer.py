"""
CStar - Quotation Lexer
"""

from dataclasses import dataclass
from typing import List

from cstar.errors import QuoteError

# Longest operators first.
OPERATORS = [
    "-|-", "|--", "==>", "<=>",
    "**", "==", "!=", "<=", ">=", "&&", "||", "->",
    "<", ">", "+", "-", "*", "/", "%", "~", "!", "(", ")", ",", ".", ":",
    "[", "]", ";", "=", "\\", "&",
]

UNICODE_ALIASES = {
    "∃": "exists",
    "∀": "forall",
    "λ": "\\",
    "¬": "~",
    "⇒": "==>",
    "⇔": "<=>",
    "∧": "&&",
    "∨": "||",
    "≤": "<=",
    "≥": ">=",
    "≠": "!=",
}

KEYWORDS = {"exists", "forall", "EXP"}


@dataclass(frozen=True)
class Token:
    kind: str  # NUM, AMPNUM, ADDR, IDENT, TYVAR, ANTI, OP, KW, EOF
    text: str
    pos: int


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_'"


def tokenize(source: str) -> List[Token]:
    """Split a quotation body into tokens.

    Args:
        source (str): Quotation text without backticks

    Returns:
        list: Tokens, terminated by an EOF token
    """
    tokens: List[Token] = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch in UNICODE_ALIASES:
            alias = UNICODE_ALIASES[ch]
            kind = "KW" if alias in KEYWORDS else "OP"
            tokens.append(Token(kind, alias, i))
            i += 1
            continue
        if ch == "$" and source.startswith("${", i):
            end = source.find("}", i)
            if end < 0:
                raise QuoteError(f"unterminated anti-quotation at offset {i}")
            tokens.append(Token("ANTI", source[i + 2:end].strip(), i))
            i = end + 1
            continue
        if ch == "&" and i + 1 < n and source[i + 1].isdigit():
            j = i + 1
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("AMPNUM", source[i + 1:j], i))
            i = j
            continue
        if ch == "&" and i + 1 < n and source[i + 1] == '"':
            end = source.find('"', i + 2)
            if end < 0:
                raise QuoteError(f"unterminated address literal at offset {i}")
            tokens.append(Token("ADDR", source[i + 2:end], i))
            i = end + 1
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("NUM", source[i:j], i))
            i = j
            continue
        if ch == "'" and i + 1 < n and _is_ident_start(source[i + 1]):
            j = i + 1
            while j < n and _is_ident_char(source[j]):
                j += 1
            tokens.append(Token("TYVAR", source[i + 1:j], i))
            i = j
            continue
        if _is_ident_start(ch):
            j = i
            while j < n and _is_ident_char(source[j]):
                j += 1
            word = source[i:j]
            kind = "KW" if word in KEYWORDS else "IDENT"
            if word == "lambda":
                kind, word = "OP", "\\"
            tokens.append(Token(kind, word, i))
            i = j
            continue
        for op in OPERATORS:
            if source.startswith(op, i):
                tokens.append(Token("OP", op, i))
                i += len(op)
                break
        else:
            raise QuoteError(f"unexpected character {ch!r} at offset {i}")
    tokens.append(Token("EOF", "", n))
    return tokens

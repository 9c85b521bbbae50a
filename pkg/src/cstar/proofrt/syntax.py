"""
CStar - Proof Language Syntax

Proof code is a C subset over the types void, int, term and thm (and arrays
of them). It reuses the C frontend's expression and statement grammar;
global proof blocks may also define proof functions.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from cstar.cfront import ast
from cstar.cfront.lexer import tokenize
from cstar.cfront.parser import QUALIFIERS, Parser

logger = logging.getLogger(__name__)

PROOF_BASE_WORDS = {"void", "int", "char", "bool", "term", "thm", "code_segment_t"}


@dataclass(frozen=True)
class ProofFuncDef:
    name: str
    ret: ast.CType
    params: Tuple[ast.Param, ...]
    body: Tuple[ast.Stmt, ...]
    file: Optional[str] = field(default=None, compare=False)
    line: int = field(default=0, compare=False)


ProofItem = Union[ProofFuncDef, ast.Stmt]


class ProofParser(Parser):
    """Parser for the text of one proof block."""

    base_words = PROOF_BASE_WORDS
    typedefs = {}

    def parse_unit(self, allow_functions: bool) -> List[ProofItem]:
        items: List[ProofItem] = []
        while self.peek().kind != "EOF":
            if self.is_function_start():
                if not allow_functions:
                    self.fail("proof functions must be defined in a global proof block")
                items.append(self.parse_function())
            else:
                items.extend(self.parse_statement())
        return items

    def is_function_start(self) -> bool:
        if not self.is_type_start():
            return False
        offset = 0
        while self.peek(offset).kind == "IDENT" and self.peek(offset).text in QUALIFIERS:
            offset += 1
        offset += 1
        while self.at("*", offset):
            offset += 1
        return self.peek(offset).kind == "IDENT" and self.at("(", offset + 1)

    def parse_function(self) -> ProofFuncDef:
        ret = self.parse_type_name()
        name_tok = self.ident()
        self.expect("(")
        params: List[ast.Param] = []
        if self.at("void") and self.at(")", 1):
            self.advance()
        while not self.at(")"):
            ty = self.parse_type_name()
            name = self.ident().text
            if self.accept("["):
                self.expect("]")
                ty = ast.CType(ty.base, ty.pointers, array=True)
            params.append(ast.Param(name, ty))
            if not self.accept(","):
                break
        self.expect(")")
        self.expect("{")
        body = self.parse_block_body()
        return ProofFuncDef(name_tok.text, ret, tuple(params), body,
                            self.file_of(name_tok), self.line_of(name_tok))


def parse_proof_block(block: ast.ProofBlock, allow_functions: bool) -> List[ProofItem]:
    """Parse the text of a proof block, keeping its source lines.

    Args:
        block (ProofBlock): Proof block from the C frontend
        allow_functions (bool): Whether function definitions are allowed (global blocks)

    Returns:
        list: Function definitions and statements in order
    """
    tokens = tokenize(block.text, block.file, first_line=block.line or 1)
    items = ProofParser(tokens, block.file).parse_unit(allow_functions)
    logger.debug(f"parsed proof block at {block.file}:{block.line}: {len(items)} items")
    return items

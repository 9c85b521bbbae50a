"""
CStar - Term Printer

Deterministic rendering in quotation syntax. Parentheses are emitted only
where the binding powers of the parser require them, so that printing and
re-parsing yields an alpha-equal term.
"""

from typing import List, Optional

from cstar.kernel.terms import (
    Abs,
    App,
    Const,
    Term,
    Var,
    dest_int,
    is_addr_name,
    is_numeral_name,
    strip_app,
)
from cstar.kernel.types import BOOL, type_to_string
from cstar.quote.parser import INFIX, UNARY_BP

# Constant name -> printed operator.
_INFIX_NAMES = {
    "|--": "|--",
    "-|-": "-|-",
    "**": "**",
    "==>": "==>",
    "||": "||",
    "&&": "&&",
    "hand": "&&",
    "<": "<",
    "<=": "<=",
    ">": ">",
    ">=": ">=",
    "+": "+",
    "-": "-",
    "*": "*",
    "/": "/",
    "%": "%",
    "EXP": "EXP",
}

_BINDERS = {"!": "forall", "?": "exists", "hexists": "exists"}


def print_term(t: Term) -> str:
    return _pp(t, 0)


def _infix_symbol(t: Term) -> Optional[str]:
    if not isinstance(t, Const):
        return None
    if t.name == "=":
        dom = t.ty.args[0]
        return "<=>" if dom == BOOL else "=="
    return _INFIX_NAMES.get(t.name)


def _paren(text: str, needed: bool) -> str:
    return f"({text})" if needed else text


def _binder_text(keyword: str, v: Var, body: Term, ctx: int) -> str:
    text = f"{keyword} ({v.name}:{type_to_string(v.ty)}). {_pp(body, 0)}"
    return _paren(text, ctx > 0)


def _list_items(t: Term) -> Optional[List[Term]]:
    items: List[Term] = []
    while True:
        if isinstance(t, Const) and t.name == "nil":
            return items
        head, args = strip_app(t)
        if not (isinstance(head, Const) and head.name == "cons" and len(args) == 2):
            return None
        items.append(args[0])
        t = args[1]


def _const_text(c: Const) -> str:
    if is_numeral_name(c.name):
        return "&" + c.name
    if is_addr_name(c.name):
        return c.name
    symbol = _infix_symbol(c)
    if symbol is not None:
        return f"({symbol})"
    if c.name == "~":
        return "(~)"
    if c.name in ("!", "?"):
        return "(forall)" if c.name == "!" else "(exists)"
    return c.name


def _pp(t: Term, ctx: int) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return _const_text(t)
    if isinstance(t, Abs):
        return _binder_text("\\", t.bvar, t.body, ctx)

    value = dest_int(t)
    if value is not None:
        return _paren(f"-&{-value}", ctx > UNARY_BP)

    fn, arg = t.fn, t.arg
    if isinstance(fn, Const):
        if fn.name in _BINDERS and isinstance(arg, Abs):
            return _binder_text(_BINDERS[fn.name], arg.bvar, arg.body, ctx)
        if fn.name == "neg":
            return _paren("-" + _pp(arg, UNARY_BP), ctx > UNARY_BP)
        if fn.name == "~":
            inner = arg
            if isinstance(inner, App) and isinstance(inner.fn, App):
                op = inner.fn.fn
                if isinstance(op, Const) and op.name == "=":
                    text = f"{_pp(inner.fn.arg, 51)} != {_pp(inner.arg, 51)}"
                    return _paren(text, ctx > 50)
            return _paren("~" + _pp(arg, UNARY_BP), ctx > UNARY_BP)

    items = _list_items(t)
    if items is not None:
        return "[" + "; ".join(_pp(item, 0) for item in items) + "]"

    if isinstance(fn, App):
        symbol = _infix_symbol(fn.fn)
        if symbol is not None:
            bp, assoc = INFIX[symbol]
            left_ctx = bp if assoc == "left" else bp + 1
            right_ctx = bp if assoc == "right" else bp + 1
            text = f"{_pp(fn.arg, left_ctx)} {symbol} {_pp(arg, right_ctx)}"
            return _paren(text, ctx > bp)

    head, args = strip_app(t)
    if isinstance(head, (Var, Const)):
        head_text = _pp(head, 0)
    else:
        head_text = f"({_pp(head, 0)})"
    return head_text + "(" + ", ".join(_pp(a, 0) for a in args) + ")"

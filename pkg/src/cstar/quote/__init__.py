"""
CStar - Quotations

Backtick quotation syntax for object-logic terms: parsing with anti-quotation
splicing, and a printer whose output parses back to an alpha-equal term.
"""

from cstar.quote.env import SyntaxEnv
from cstar.quote.parser import parse_bool, parse_hprop, parse_term, parse_type
from cstar.quote.printer import print_term

__all__ = ["SyntaxEnv", "parse_bool", "parse_hprop", "parse_term", "parse_type", "print_term"]

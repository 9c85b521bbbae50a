"""
CStar - Syntax Environment

Name resolution context for quotations: anti-quotation variables, logical
variables in scope, C-scope aliases, and the registry of constants.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, Optional

from cstar.kernel.registry import Registry
from cstar.kernel.terms import Term, Var


@dataclass
class SyntaxEnv:
    registry: Registry
    variables: Dict[str, Term] = field(default_factory=dict)
    antiquotes: Dict[str, Term] = field(default_factory=dict)
    c_names: Dict[str, Term] = field(default_factory=dict)

    def lookup(self, name: str) -> Optional[Term]:
        """Resolve a bare identifier to a logical variable, if any."""
        if name in self.variables:
            return self.variables[name]
        return self.c_names.get(name)

    def with_variables(self, variables: Iterable[Var]) -> "SyntaxEnv":
        merged = dict(self.variables)
        for v in variables:
            merged[v.name] = v
        return replace(self, variables=merged)

    def with_antiquotes(self, antiquotes: Dict[str, Term]) -> "SyntaxEnv":
        merged = dict(self.antiquotes)
        merged.update(antiquotes)
        return replace(self, antiquotes=merged)

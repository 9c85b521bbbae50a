"""
CStar - Verification Conditions

Obligations the engine could not discharge automatically. Goals are closed
by universal quantification; ids follow emission order (vc1, vc2, ...).
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from cstar.kernel.terms import Term, Var, frees, list_mk_forall
from cstar.quote.printer import print_term

VC_KINDS = (
    "assert",
    "invariant-establish",
    "invariant-restore",
    "postcondition",
    "call-precondition",
    "continue",
    "break",
    "side-condition",
)


@dataclass
class VerificationCondition:
    id: str
    kind: str
    goal: Term
    function: str
    file: Optional[str] = None
    line: Optional[int] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            "id": self.id,
            "kind": self.kind,
            "file": self.file,
            "line": self.line,
            "goal": print_term(self.goal),
        }


def close_goal(goal: Term, leading: Sequence[Var] = ()) -> Term:
    """Universally close goal: leading variables first, the rest sorted by name."""
    free = frees(goal)
    first = [v for v in leading if v in free]
    rest = sorted((v for v in free if v not in first), key=lambda v: (v.name, str(v.ty)))
    return list_mk_forall(first + rest, goal)


@dataclass
class VCCollector:
    """Run-wide VC list, so ids are unique across functions."""

    vcs: List[VerificationCondition] = field(default_factory=list)
    auto_discharged: int = 0

    def emit(self, kind: str, goal: Term, function: str, file: Optional[str],
             line: Optional[int], leading: Sequence[Var] = ()) -> VerificationCondition:
        vc = VerificationCondition(
            id=f"vc{len(self.vcs) + 1}",
            kind=kind,
            goal=close_goal(goal, leading),
            function=function,
            file=file,
            line=line,
        )
        self.vcs.append(vc)
        return vc

    def for_function(self, name: str) -> List[VerificationCondition]:
        return [vc for vc in self.vcs if vc.function == name]

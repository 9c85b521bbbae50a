"""
CStar - Term Matching

First-order matching of a pattern term against a target, with a designated
set of pattern variables (holes) and type-variable instantiation. Used by the
rewriter, by local_apply and by the engine's frame matching.
"""

from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from cstar.kernel.terms import (
    Abs,
    App,
    Const,
    Term,
    Var,
    alpha_eq,
    frees,
    inst_type_term,
    vsubst,
)
from cstar.kernel.types import INTEGER, HolType, TyVar, type_match, type_subst
from cstar.seplogic.arith import arith_equal

Match = Tuple[Dict[Var, Term], Dict[TyVar, HolType]]


class _Matcher:
    def __init__(self, holes: FrozenSet[Var], arith: bool):
        self.holes = holes
        self.arith = arith

    def ty(self, pat: HolType, tgt: HolType, tyenv: Dict[TyVar, HolType]) -> Optional[Dict[TyVar, HolType]]:
        return type_match(pat, tgt, tyenv)

    def run(self, pat: Term, tgt: Term, env: List[Tuple[Var, Var]], theta: Dict[Var, Term],
            tyenv: Dict[TyVar, HolType]) -> Optional[Match]:
        if isinstance(pat, Var):
            for left, right in reversed(env):
                if left == pat or right == tgt:
                    if left == pat and right == tgt:
                        return theta, tyenv
                    return None
            if pat in self.holes:
                tyenv = self.ty(pat.ty, tgt.ty, tyenv)
                if tyenv is None:
                    return None
                if any(right in frees(tgt) for _, right in env):
                    return None
                bound = theta.get(pat)
                if bound is not None:
                    if alpha_eq(bound, tgt) or (self.arith and arith_equal(bound, tgt)):
                        return theta, tyenv
                    return None
                theta = dict(theta)
                theta[pat] = tgt
                return theta, tyenv
            if isinstance(tgt, Var) and tgt.name == pat.name:
                tyenv = self.ty(pat.ty, tgt.ty, tyenv)
                return None if tyenv is None else (theta, tyenv)
            return self._arith_fallback(pat, tgt, env, theta, tyenv)
        if isinstance(pat, Const):
            if isinstance(tgt, Const) and tgt.name == pat.name:
                tyenv = self.ty(pat.ty, tgt.ty, tyenv)
                return None if tyenv is None else (theta, tyenv)
            return self._arith_fallback(pat, tgt, env, theta, tyenv)
        if isinstance(pat, App):
            if isinstance(tgt, App):
                found = self.run(pat.fn, tgt.fn, env, theta, tyenv)
                if found is not None:
                    found = self.run(pat.arg, tgt.arg, env, *found)
                    if found is not None:
                        return found
            return self._arith_fallback(pat, tgt, env, theta, tyenv)
        if not isinstance(tgt, Abs):
            return None
        tyenv = self.ty(pat.bvar.ty, tgt.bvar.ty, tyenv)
        if tyenv is None:
            return None
        return self.run(pat.body, tgt.body, env + [(pat.bvar, tgt.bvar)], theta, tyenv)

    def _arith_fallback(self, pat: Term, tgt: Term, env, theta, tyenv) -> Optional[Match]:
        """Integer subterms without holes may match modulo ring arithmetic."""
        if not self.arith or env or pat.ty != INTEGER or tgt.ty != INTEGER:
            return None
        pending = frees(pat) & self.holes
        if any(v not in theta for v in pending):
            return None
        if arith_equal(vsubst({v: theta[v] for v in pending}, pat), tgt):
            return theta, tyenv
        return None


def match_term(
    pattern: Term,
    target: Term,
    holes: Iterable[Var] = (),
    theta: Optional[Dict[Var, Term]] = None,
    tyenv: Optional[Dict[TyVar, HolType]] = None,
    arith: bool = False,
) -> Optional[Match]:
    """Match pattern against target.

    Args:
        pattern (Term): Term whose holes may be instantiated
        target (Term): Term to match
        holes (iterable): Pattern variables that may be instantiated
        theta (dict, optional): Hole bindings found so far
        tyenv (dict, optional): Type-variable bindings found so far
        arith (bool): Compare integer subterms modulo arithmetic normal form

    Returns:
        tuple or None: (hole bindings, type bindings), or None on mismatch.
            Hole keys are the pattern's own (uninstantiated) variables.
    """
    matcher = _Matcher(frozenset(holes), arith)
    return matcher.run(pattern, target, [], dict(theta or {}), dict(tyenv or {}))


def instantiate(t: Term, match: Match) -> Term:
    """Apply a match to t: type variables first, then hole bindings."""
    theta, tyenv = match
    t = inst_type_term(tyenv, t)
    return vsubst({Var(v.name, type_subst(tyenv, v.ty)): s for v, s in theta.items()}, t)

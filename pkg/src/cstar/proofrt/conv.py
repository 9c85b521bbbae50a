"""
CStar - Rewriting

Equational rewriting built from the kernel rules: one-step rewriting with a
(possibly universally quantified) equation, rewriting to a fixpoint with a
list of equations, and beta normalization. Every function here returns a
theorem; nothing is asserted without the kernel.
"""

import logging
from typing import Optional, Sequence, Tuple

from cstar.errors import RuleError
from cstar.kernel import thm as rules
from cstar.kernel.terms import Abs, App, Term, Var, alpha_eq, dest_eq, frees_of, strip_forall
from cstar.kernel.thm import Theorem
from cstar.kernel.types import type_subst
from cstar.seplogic.matching import Match, match_term
from cstar.utils.constants import MAX_REWRITE_PASSES

logger = logging.getLogger(__name__)


def sides(th: Theorem, rule: str) -> Tuple[Term, Term]:
    parts = dest_eq(th.concl)
    if parts is None:
        raise RuleError(f"{rule}: theorem is not an equation")
    return parts


def instantiate_equation(eq_th: Theorem, match: Match, bound: Sequence) -> Theorem:
    """Specialize the quantifiers of eq_th according to match."""
    theta, tyenv = match
    th = rules.inst_type(tyenv, eq_th) if tyenv else eq_th
    for v in bound:
        th = rules.spec(theta.get(v, _retyped(v, tyenv)), th)
    return th


def _retyped(v: Var, tyenv) -> Var:
    return Var(v.name, type_subst(tyenv, v.ty))


def rewrite_conv(eq_th: Theorem, t: Term) -> Optional[Theorem]:
    """|- t = t' rewriting the first subterm matching the equation, or None."""
    bound, body = strip_forall(eq_th.concl)
    parts = dest_eq(body)
    if parts is None:
        raise RuleError("rewrite: theorem is not an equation")
    lhs, _ = parts
    return _rewrite_at(eq_th, bound, lhs, t)


def _rewrite_at(eq_th: Theorem, bound, lhs: Term, t: Term) -> Optional[Theorem]:
    found = match_term(lhs, t, bound)
    if found is not None:
        th = instantiate_equation(eq_th, found, bound)
        left, _ = sides(th, "rewrite")
        if alpha_eq(left, t):
            return rules.trans(rules.refl(t), th)
    if isinstance(t, App):
        inner = _rewrite_at(eq_th, bound, lhs, t.fn)
        if inner is not None:
            return rules.mk_comb_rule(inner, rules.refl(t.arg))
        inner = _rewrite_at(eq_th, bound, lhs, t.arg)
        if inner is not None:
            return rules.mk_comb_rule(rules.refl(t.fn), inner)
    elif isinstance(t, Abs):
        inner = _rewrite_at(eq_th, bound, lhs, t.body)
        if inner is not None:
            if t.bvar in frees_of(inner.hyps):
                return None
            return rules.abs_rule(t.bvar, inner)
    return None


def rewrite(eq_th: Theorem, t: Term) -> Theorem:
    """|- t = t' by one rewrite with eq_th; |- t = t when nothing matches.

    The leftmost-outermost subterm of t matching the left side of eq_th is
    replaced; quantified variables of eq_th act as pattern variables.
    """
    result = rewrite_conv(eq_th, t)
    return rules.refl(t) if result is None else result


def rewrite_rule_list(eqs: Sequence[Theorem], th: Theorem) -> Theorem:
    """Rewrite the conclusion of th with eqs until no equation applies.

    Raises:
        RuleError: If the rewriting does not reach a fixpoint
    """
    for th_eq in eqs:
        bound, body = strip_forall(th_eq.concl)
        if dest_eq(body) is None:
            raise RuleError("rewrite_rule_list: every rule must be an equation")
    passes = 0
    while True:
        step = None
        for th_eq in eqs:
            step = rewrite_conv(th_eq, th.concl)
            if step is not None:
                break
        if step is None:
            return th
        th = rules.eq_mp(step, th)
        passes += 1
        if passes >= MAX_REWRITE_PASSES:
            raise RuleError("rewrite_rule_list: rewriting does not terminate")


def beta_conv(t: Term) -> Theorem:
    """|- t = t' with every beta-redex of t reduced."""
    if isinstance(t, App):
        th = rules.mk_comb_rule(beta_conv(t.fn), beta_conv(t.arg))
        _, reduced = sides(th, "beta_norm")
        if isinstance(reduced, App) and isinstance(reduced.fn, Abs):
            step = rules.beta(reduced)
            _, body = sides(step, "beta_norm")
            return rules.trans(th, rules.trans(step, beta_conv(body)))
        return th
    if isinstance(t, Abs):
        return rules.abs_rule(t.bvar, beta_conv(t.body))
    return rules.refl(t)


def conv_rule(conv_th: Theorem, th: Theorem) -> Theorem:
    """Transport th along |- concl(th) = p."""
    return rules.eq_mp(conv_th, th)
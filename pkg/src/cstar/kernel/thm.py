"""
CStar - Theorems and Primitive Rules

A Theorem can only be produced by the functions in this module (and by the
registry's axiom, definition and oracle entry points, which share the private
construction key). Every rule unions the provenance tags of its premises.

Equations on hprop are bi-entailments: rules that build an equation between
hprop terms build `-|-`, and every rule accepting an equation accepts either.
"""

from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from cstar.errors import KernelError, RuleError
from cstar.kernel.terms import (
    Abs,
    App,
    Term,
    Var,
    alpha_eq,
    dest_eq,
    dest_forall,
    dest_imp,
    frees_of,
    inst_type_term,
    mk_eq,
    mk_forall,
    mk_imp,
    vsubst,
)
from cstar.kernel.types import BOOL, HolType, TyVar, type_match, type_to_string

_KERNEL_KEY = object()


class Theorem:
    """A sequent `hyps |- concl` with the set of axiom tags it depends on."""

    __slots__ = ("_hyps", "_concl", "_axioms")

    def __init__(self, hyps: Tuple[Term, ...], concl: Term, axioms: FrozenSet[str], key=None):
        if key is not _KERNEL_KEY:
            raise KernelError("theorems can only be constructed by kernel rules")
        object.__setattr__(self, "_hyps", hyps)
        object.__setattr__(self, "_concl", concl)
        object.__setattr__(self, "_axioms", axioms)

    def __setattr__(self, name, value):
        raise KernelError("theorems are immutable")

    @property
    def hyps(self) -> Tuple[Term, ...]:
        return self._hyps

    @property
    def concl(self) -> Term:
        return self._concl

    @property
    def axioms(self) -> FrozenSet[str]:
        return self._axioms

    def __repr__(self) -> str:
        from cstar.quote.printer import print_term

        hyps = ", ".join(print_term(h) for h in self._hyps)
        return f"{hyps} |- {print_term(self._concl)}" if hyps else f"|- {print_term(self._concl)}"


def _make(hyps: Iterable[Term], concl: Term, axioms: Iterable[str]) -> Theorem:
    if concl.ty != BOOL:
        raise RuleError(f"conclusion must have type bool, not {type_to_string(concl.ty)}")
    return Theorem(_dedupe(hyps), concl, frozenset(axioms), key=_KERNEL_KEY)


def _dedupe(terms: Iterable[Term]) -> Tuple[Term, ...]:
    out: List[Term] = []
    for t in terms:
        if t.ty != BOOL:
            raise RuleError("hypotheses must have type bool")
        if not any(alpha_eq(t, seen) for seen in out):
            out.append(t)
    return tuple(out)


def _without(hyps: Sequence[Term], t: Term) -> List[Term]:
    return [h for h in hyps if not alpha_eq(h, t)]


def _sides(th: Theorem, rule: str) -> Tuple[Term, Term]:
    sides = dest_eq(th.concl)
    if sides is None:
        raise RuleError(f"{rule}: conclusion is not an equation")
    return sides


def conclusion(th: Theorem) -> Term:
    return th.concl


def hypotheses(th: Theorem) -> Tuple[Term, ...]:
    return th.hyps


# ---------------------------------------------------------------------------
# Equality rules
# ---------------------------------------------------------------------------


def refl(t: Term) -> Theorem:
    return _make((), mk_eq(t, t), ())


def trans(th1: Theorem, th2: Theorem) -> Theorem:
    a, b = _sides(th1, "trans")
    b2, c = _sides(th2, "trans")
    if not alpha_eq(b, b2):
        raise RuleError("trans: middle terms are not alpha-equivalent")
    return _make(th1.hyps + th2.hyps, mk_eq(a, c), th1.axioms | th2.axioms)


def symm(th: Theorem) -> Theorem:
    a, b = _sides(th, "symm")
    return _make(th.hyps, mk_eq(b, a), th.axioms)


def assume(t: Term) -> Theorem:
    if t.ty != BOOL:
        raise RuleError(f"assume: term has type {type_to_string(t.ty)}, not bool")
    return _make((t,), t, ())


def eq_mp(th_eq: Theorem, th: Theorem) -> Theorem:
    p, q = _sides(th_eq, "eq_mp")
    if p.ty != BOOL:
        raise RuleError("eq_mp: equation is not between propositions")
    if not alpha_eq(p, th.concl):
        raise RuleError("eq_mp: left side of the equation does not match the theorem")
    return _make(th_eq.hyps + th.hyps, q, th_eq.axioms | th.axioms)


def deduct_antisym(th1: Theorem, th2: Theorem) -> Theorem:
    p, q = th1.concl, th2.concl
    hyps = _without(th1.hyps, q) + _without(th2.hyps, p)
    return _make(hyps, mk_eq(p, q), th1.axioms | th2.axioms)


def abs_rule(v: Var, th: Theorem) -> Theorem:
    if not isinstance(v, Var):
        raise RuleError("abs: expected a variable")
    if v in frees_of(th.hyps):
        raise RuleError(f"abs: variable {v.name} is free in the hypotheses")
    left, right = _sides(th, "abs")
    return _make(th.hyps, mk_eq(Abs(v, left), Abs(v, right)), th.axioms)


def mk_comb_rule(th_f: Theorem, th_x: Theorem) -> Theorem:
    f, g = _sides(th_f, "mk_comb")
    x, y = _sides(th_x, "mk_comb")
    try:
        left, right = App(f, x), App(g, y)
    except KernelError as exc:
        raise RuleError(f"mk_comb: {exc.message}") from exc
    return _make(th_f.hyps + th_x.hyps, mk_eq(left, right), th_f.axioms | th_x.axioms)


def beta(t: Term) -> Theorem:
    if not (isinstance(t, App) and isinstance(t.fn, Abs)):
        raise RuleError("beta: term is not a beta-redex")
    reduced = vsubst({t.fn.bvar: t.arg}, t.fn.body)
    return _make((), mk_eq(t, reduced), ())


def inst(theta: Dict[Var, Term], th: Theorem) -> Theorem:
    try:
        hyps = [vsubst(theta, h) for h in th.hyps]
        concl = vsubst(theta, th.concl)
    except KernelError as exc:
        raise RuleError(f"inst: {exc.message}") from exc
    return _make(hyps, concl, th.axioms)


def inst_type(theta: Dict[TyVar, HolType], th: Theorem) -> Theorem:
    hyps = [inst_type_term(theta, h) for h in th.hyps]
    return _make(hyps, inst_type_term(theta, th.concl), th.axioms)


# ---------------------------------------------------------------------------
# Connective rules
# ---------------------------------------------------------------------------


def mp(th_imp: Theorem, th: Theorem) -> Theorem:
    parts = dest_imp(th_imp.concl)
    if parts is None:
        raise RuleError("mp: first theorem is not an implication")
    ante, cons = parts
    if not alpha_eq(ante, th.concl):
        raise RuleError("mp: antecedent does not match the second theorem")
    return _make(th_imp.hyps + th.hyps, cons, th_imp.axioms | th.axioms)


def disch(p: Term, th: Theorem) -> Theorem:
    if p.ty != BOOL:
        raise RuleError("disch: term is not a proposition")
    return _make(_without(th.hyps, p), mk_imp(p, th.concl), th.axioms)


def spec(t: Term, th: Theorem) -> Theorem:
    parts = dest_forall(th.concl)
    if parts is None:
        raise RuleError("spec: conclusion is not universally quantified")
    v, _ = parts
    if v.ty != t.ty:
        theta = type_match(v.ty, t.ty)
        if theta is None:
            raise RuleError(
                f"spec: cannot instantiate {v.name}:{type_to_string(v.ty)} "
                f"with a term of type {type_to_string(t.ty)}"
            )
        th = inst_type(theta, th)
    v, body = dest_forall(th.concl)
    return _make(th.hyps, vsubst({v: t}, body), th.axioms)


def gen(v: Var, th: Theorem) -> Theorem:
    if not isinstance(v, Var):
        raise RuleError("gen: expected a variable")
    if v in frees_of(th.hyps):
        raise RuleError(f"gen: variable {v.name} is free in the hypotheses")
    return _make(th.hyps, mk_forall(v, th.concl), th.axioms)


def _mint(concl: Term, tag: str) -> Theorem:
    """Construct an axiomatic theorem; used by the registry only."""
    return _make((), concl, (tag,))


def _mint_definition(concl: Term) -> Theorem:
    return _make((), concl, ())

"""
CStar - HOL Terms

Named-variable terms of simply-typed higher-order logic. Terms are immutable
and well-typed by construction: building an application whose argument type
disagrees with the function's domain raises TermError.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple, Union

from cstar.errors import TermError
from cstar.kernel.types import (
    BOOL,
    HPROP,
    INTEGER,
    HolType,
    TyApp,
    TyVar,
    dest_fun,
    fun_ty,
    is_fun,
    type_subst,
    type_to_string,
    type_vars,
)


@dataclass(frozen=True)
class Var:
    name: str
    ty: HolType


@dataclass(frozen=True)
class Const:
    name: str
    ty: HolType


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"
    ty: HolType = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        fty = self.fn.ty
        if not is_fun(fty):
            raise TermError(
                f"cannot apply a term of type {type_to_string(fty)} "
                f"to an argument of type {type_to_string(self.arg.ty)}"
            )
        dom, cod = fty.args
        if dom != self.arg.ty:
            raise TermError(
                f"argument type mismatch: function expects {type_to_string(dom)}, "
                f"argument has {type_to_string(self.arg.ty)}"
            )
        object.__setattr__(self, "ty", cod)


@dataclass(frozen=True)
class Abs:
    bvar: Var
    body: "Term"
    ty: HolType = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.bvar, Var):
            raise TermError("abstraction must bind a variable")
        object.__setattr__(self, "ty", fun_ty(self.bvar.ty, self.body.ty))


Term = Union[Var, Const, App, Abs]


def mk_app(fn: Term, arg: Term) -> App:
    return App(fn, arg)


def list_mk_app(fn: Term, args: Iterable[Term]) -> Term:
    for arg in args:
        fn = App(fn, arg)
    return fn


def strip_app(t: Term) -> Tuple[Term, List[Term]]:
    args: List[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def head_name(t: Term) -> Optional[str]:
    """Name of the constant at the head of an application spine, if any."""
    head, _ = strip_app(t)
    return head.name if isinstance(head, Const) else None


# ---------------------------------------------------------------------------
# Free variables, renaming and substitution
# ---------------------------------------------------------------------------


def frees(t: Term) -> FrozenSet[Var]:
    found: Set[Var] = set()
    _frees(t, frozenset(), found)
    return frozenset(found)


def _frees(t: Term, bound: FrozenSet[Var], found: Set[Var]) -> None:
    while True:
        if isinstance(t, Var):
            if t not in bound:
                found.add(t)
            return
        if isinstance(t, Const):
            return
        if isinstance(t, App):
            _frees(t.fn, bound, found)
            t = t.arg
            continue
        bound = bound | {t.bvar}
        t = t.body


def frees_of(terms: Iterable[Term]) -> FrozenSet[Var]:
    found: Set[Var] = set()
    for t in terms:
        _frees(t, frozenset(), found)
    return frozenset(found)


def free_in(v: Var, t: Term) -> bool:
    return v in frees(t)


def all_var_names(t: Term) -> Set[str]:
    """Names of every variable occurring in t, free or bound."""
    names: Set[str] = set()
    stack = [t]
    while stack:
        cur = stack.pop()
        if isinstance(cur, Var):
            names.add(cur.name)
        elif isinstance(cur, App):
            stack.append(cur.fn)
            stack.append(cur.arg)
        elif isinstance(cur, Abs):
            names.add(cur.bvar.name)
            stack.append(cur.body)
    return names


def variant_name(name: str, avoid: Iterable[str]) -> str:
    """Return name, or name with a numeric suffix, not present in avoid."""
    avoid = set(avoid)
    if name not in avoid:
        return name
    base = name.rstrip("0123456789") or name
    index = 1
    while f"{base}{index}" in avoid:
        index += 1
    return f"{base}{index}"


def variant(v: Var, avoid: Iterable[str]) -> Var:
    return Var(variant_name(v.name, avoid), v.ty)


def vsubst(theta: Dict[Var, Term], t: Term) -> Term:
    """Capture-avoiding simultaneous substitution of terms for free variables."""
    for v, s in theta.items():
        if v.ty != s.ty:
            raise TermError(
                f"substitution for {v.name} changes its type from "
                f"{type_to_string(v.ty)} to {type_to_string(s.ty)}"
            )
    theta = {v: s for v, s in theta.items() if v != s}
    if not theta:
        return t
    return _vsubst(theta, t)


def _vsubst(theta: Dict[Var, Term], t: Term) -> Term:
    if isinstance(t, Var):
        return theta.get(t, t)
    if isinstance(t, Const):
        return t
    if isinstance(t, App):
        fn = _vsubst(theta, t.fn)
        arg = _vsubst(theta, t.arg)
        if fn is t.fn and arg is t.arg:
            return t
        return App(fn, arg)
    body_frees = frees(t.body)
    inner = {v: s for v, s in theta.items() if v != t.bvar and v in body_frees}
    if not inner:
        return t
    bvar, body = t.bvar, t.body
    incoming = frees_of(inner.values())
    if bvar in incoming or any(u.name == bvar.name for u in incoming):
        avoid = {u.name for u in body_frees | incoming} | set(n.name for n in inner)
        fresh = variant(bvar, avoid)
        body = _vsubst({bvar: fresh}, body)
        bvar = fresh
    return Abs(bvar, _vsubst(inner, body))


def inst_type_term(theta: Dict[TyVar, HolType], t: Term) -> Term:
    """Instantiate type variables throughout t, renaming binders that would clash."""
    if not theta:
        return t
    if isinstance(t, Var):
        return Var(t.name, type_subst(theta, t.ty))
    if isinstance(t, Const):
        return Const(t.name, type_subst(theta, t.ty))
    if isinstance(t, App):
        return App(inst_type_term(theta, t.fn), inst_type_term(theta, t.arg))
    bvar, body = t.bvar, t.body
    new_bvar = Var(bvar.name, type_subst(theta, bvar.ty))
    others = {Var(u.name, type_subst(theta, u.ty)) for u in frees(body) if u != bvar}
    if new_bvar in others:
        fresh = variant(bvar, all_var_names(body) | {bvar.name})
        body = vsubst({bvar: fresh}, body)
        new_bvar = Var(fresh.name, new_bvar.ty)
    return Abs(new_bvar, inst_type_term(theta, body))


def term_type_vars(t: Term) -> Set[TyVar]:
    found: Set[TyVar] = set()
    stack = [t]
    while stack:
        cur = stack.pop()
        if isinstance(cur, (Var, Const)):
            found |= type_vars(cur.ty)
        elif isinstance(cur, App):
            stack.append(cur.fn)
            stack.append(cur.arg)
        else:
            found |= type_vars(cur.bvar.ty)
            stack.append(cur.body)
    return found


# ---------------------------------------------------------------------------
# Alpha equivalence
# ---------------------------------------------------------------------------


def alpha_eq(t1: Term, t2: Term) -> bool:
    """True iff t1 and t2 are equal up to renaming of bound variables."""
    if t1 is t2:
        return True
    return _alpha(t1, t2, [])


def _alpha(t1: Term, t2: Term, env: List[Tuple[Var, Var]]) -> bool:
    while True:
        if isinstance(t1, Var):
            if not isinstance(t2, Var):
                return False
            for left, right in reversed(env):
                if left == t1 or right == t2:
                    return left == t1 and right == t2
            return t1 == t2
        if isinstance(t1, Const):
            return t1 == t2
        if isinstance(t1, App):
            if not isinstance(t2, App):
                return False
            if not _alpha(t1.fn, t2.fn, env):
                return False
            t1, t2 = t1.arg, t2.arg
            continue
        if not isinstance(t2, Abs) or t1.bvar.ty != t2.bvar.ty:
            return False
        if not env and t1 == t2:
            return True
        env = env + [(t1.bvar, t2.bvar)]
        t1, t2 = t1.body, t2.body


def alpha_member(t: Term, terms: Iterable[Term]) -> bool:
    return any(alpha_eq(t, other) for other in terms)


# ---------------------------------------------------------------------------
# Logical vocabulary shared by the kernel rules
# ---------------------------------------------------------------------------

def eq_const(ty: HolType) -> Const:
    return Const("=", fun_ty(ty, fun_ty(ty, BOOL)))


BIENTAIL = Const("-|-", fun_ty(HPROP, fun_ty(HPROP, BOOL)))
ENTAIL = Const("|--", fun_ty(HPROP, fun_ty(HPROP, BOOL)))
IMP = Const("==>", fun_ty(BOOL, fun_ty(BOOL, BOOL)))
CONJ = Const("&&", fun_ty(BOOL, fun_ty(BOOL, BOOL)))
DISJ = Const("||", fun_ty(BOOL, fun_ty(BOOL, BOOL)))
NOT = Const("~", fun_ty(BOOL, BOOL))
TRUE = Const("T", BOOL)
FALSE = Const("F", BOOL)
NEG = Const("neg", fun_ty(INTEGER, INTEGER))
SEP = Const("**", fun_ty(HPROP, fun_ty(HPROP, HPROP)))
EMP = Const("emp", HPROP)


def mk_binop(op: Const, left: Term, right: Term) -> Term:
    return App(App(op, left), right)


def dest_binop(name: str, t: Term) -> Optional[Tuple[Term, Term]]:
    if isinstance(t, App) and isinstance(t.fn, App) and isinstance(t.fn.fn, Const):
        if t.fn.fn.name == name:
            return t.fn.arg, t.arg
    return None


def mk_eq(left: Term, right: Term) -> Term:
    """Equation between two terms; on hprop this is bi-entailment."""
    if left.ty != right.ty:
        raise TermError(
            f"cannot equate terms of types {type_to_string(left.ty)} and {type_to_string(right.ty)}"
        )
    if left.ty == HPROP:
        return mk_binop(BIENTAIL, left, right)
    return mk_binop(eq_const(left.ty), left, right)


def dest_eq(t: Term) -> Optional[Tuple[Term, Term]]:
    """Sides of an equation or bi-entailment, or None."""
    return dest_binop("=", t) or dest_binop("-|-", t)


def is_eq(t: Term) -> bool:
    return dest_eq(t) is not None


def mk_imp(ante: Term, cons: Term) -> Term:
    return mk_binop(IMP, ante, cons)


def dest_imp(t: Term) -> Optional[Tuple[Term, Term]]:
    return dest_binop("==>", t)


def mk_entail(left: Term, right: Term) -> Term:
    return mk_binop(ENTAIL, left, right)


def dest_entail(t: Term) -> Optional[Tuple[Term, Term]]:
    return dest_binop("|--", t)


def mk_sep(left: Term, right: Term) -> Term:
    return mk_binop(SEP, left, right)


def dest_sep(t: Term) -> Optional[Tuple[Term, Term]]:
    return dest_binop("**", t)


def mk_conj(left: Term, right: Term) -> Term:
    return mk_binop(CONJ, left, right)


def mk_not(t: Term) -> Term:
    return App(NOT, t)


def binder_const(name: str, ty: HolType) -> Const:
    """Binder constant: forall/exists over bool, hexists over hprop."""
    body_ty = HPROP if name == "hexists" else BOOL
    return Const(name, fun_ty(fun_ty(ty, body_ty), body_ty))


def mk_forall(v: Var, body: Term) -> Term:
    return App(binder_const("!", v.ty), Abs(v, body))


def list_mk_forall(vs: Iterable[Var], body: Term) -> Term:
    for v in reversed(list(vs)):
        body = mk_forall(v, body)
    return body


def mk_hexists(v: Var, body: Term) -> Term:
    return App(binder_const("hexists", v.ty), Abs(v, body))


def list_mk_hexists(vs: Iterable[Var], body: Term) -> Term:
    for v in reversed(list(vs)):
        body = mk_hexists(v, body)
    return body


def dest_binder(name: str, t: Term) -> Optional[Tuple[Var, Term]]:
    if isinstance(t, App) and isinstance(t.fn, Const) and t.fn.name == name:
        if isinstance(t.arg, Abs):
            return t.arg.bvar, t.arg.body
    return None


def dest_forall(t: Term) -> Optional[Tuple[Var, Term]]:
    return dest_binder("!", t)


def dest_hexists(t: Term) -> Optional[Tuple[Var, Term]]:
    return dest_binder("hexists", t)


def strip_forall(t: Term) -> Tuple[List[Var], Term]:
    vs: List[Var] = []
    while True:
        found = dest_forall(t)
        if found is None:
            return vs, t
        vs.append(found[0])
        t = found[1]


def mk_int(n: int) -> Term:
    if n < 0:
        return App(NEG, Const(str(-n), INTEGER))
    return Const(str(n), INTEGER)


def is_numeral_name(name: str) -> bool:
    return name.isdigit()


def dest_int(t: Term) -> Optional[int]:
    """Integer value of a literal `&n` or `-&n`, else None."""
    if isinstance(t, Const) and is_numeral_name(t.name) and t.ty == INTEGER:
        return int(t.name)
    if isinstance(t, App) and t.fn == NEG:
        inner = dest_int(t.arg)
        if inner is not None and isinstance(t.arg, Const):
            return -inner
    return None


def mk_addr(name: str) -> Const:
    return Const(f'&"{name}"', INTEGER)


def is_addr_name(name: str) -> bool:
    return name.startswith('&"') and name.endswith('"') and len(name) > 3


def dest_addr(t: Term) -> Optional[str]:
    if isinstance(t, Const) and is_addr_name(t.name):
        return t.name[2:-1]
    return None


def flatten_sep(t: Term) -> List[Term]:
    """Conjuncts of a `**` tree in left-to-right order (emp kept)."""
    out: List[Term] = []
    stack = [t]
    while stack:
        cur = stack.pop()
        parts = dest_sep(cur)
        if parts is None:
            out.append(cur)
        else:
            stack.append(parts[1])
            stack.append(parts[0])
    return out


def list_mk_sep(conjuncts: List[Term]) -> Term:
    """Right-associated separating conjunction; emp when empty."""
    if not conjuncts:
        return EMP
    result = conjuncts[-1]
    for c in reversed(conjuncts[:-1]):
        result = mk_sep(c, result)
    return result


def subterms(t: Term) -> Iterable[Term]:
    stack = [t]
    while stack:
        cur = stack.pop()
        yield cur
        if isinstance(cur, App):
            stack.append(cur.arg)
            stack.append(cur.fn)
        elif isinstance(cur, Abs):
            stack.append(cur.body)


def is_well_typed(t: Term) -> bool:
    """Recheck the typing invariant of every node (used by fuzz tests)."""
    for sub in subterms(t):
        if isinstance(sub, App):
            if not is_fun(sub.fn.ty):
                return False
            dom, cod = dest_fun(sub.fn.ty)
            if dom != sub.arg.ty or sub.ty != cod:
                return False
        elif isinstance(sub, Abs):
            if sub.ty != fun_ty(sub.bvar.ty, sub.body.ty):
                return False
    return True


def is_bool(t: Term) -> bool:
    return t.ty == BOOL


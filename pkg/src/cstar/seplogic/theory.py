"""
CStar - Separation Logic Theory

Registers the separation-logic vocabulary in a kernel registry together with
its trusted axioms. Each axiom is stated as a quotation, so the statement a
user sees in the trust report is exactly the text below.
"""

import logging
from typing import Dict, List, Sequence

from cstar.errors import KernelError, RuleError
from cstar.kernel import thm as rules
from cstar.kernel.registry import Registry
from cstar.kernel.terms import Term, dest_eq, strip_forall
from cstar.kernel.thm import Theorem
from cstar.kernel.types import (
    BOOL,
    CTYPE,
    HPROP,
    INT_LIST,
    INTEGER,
    TyVar,
    fun_tys,
    list_ty,
)
from cstar.quote.env import SyntaxEnv
from cstar.quote.parser import parse_term
from cstar.seplogic.ctypes_info import CTYPES

logger = logging.getLogger(__name__)

THEORY_NAME = "seplogic"

_A = TyVar("a")
_B = TyVar("b")

CONSTANTS = {
    "emp": HPROP,
    "pure": fun_tys([BOOL], HPROP),
    "hand": fun_tys([HPROP, HPROP], HPROP),
    "**": fun_tys([HPROP, HPROP], HPROP),
    "|--": fun_tys([HPROP, HPROP], BOOL),
    "-|-": fun_tys([HPROP, HPROP], BOOL),
    "hexists": fun_tys([fun_tys([_A], HPROP)], HPROP),
    "data_at": fun_tys([INTEGER, CTYPE, INTEGER], HPROP),
    "undef_data_at": fun_tys([INTEGER, CTYPE], HPROP),
    "array_at": fun_tys([INTEGER, CTYPE, INT_LIST], HPROP),
    "undef_array_at": fun_tys([INTEGER, CTYPE, INTEGER], HPROP),
    "malloc_at": fun_tys([INTEGER, INTEGER], HPROP),
    "nil": list_ty(_A),
    "cons": fun_tys([_A, list_ty(_A)], list_ty(_A)),
    "replicate": fun_tys([INTEGER, _A], list_ty(_A)),
    "fold_right": fun_tys([fun_tys([_A, _B], _B), list_ty(_A), _B], _B),
    "sizeof": fun_tys([CTYPE], INTEGER),
}

DEFINITIONS = {
    "fact": "\\(p:bool). pure p && emp",
    "hiter": "\\(hps:list hprop). fold_right((**), hps, emp)",
}

STRUCTURAL_AXIOMS = {
    "hsep-comm": "forall (h1:hprop) (h2:hprop). h1 ** h2 -|- h2 ** h1",
    "hsep-assoc": "forall (h1:hprop) (h2:hprop) (h3:hprop). (h1 ** h2) ** h3 -|- h1 ** h2 ** h3",
    "hsep-cancel-right": (
        "forall (h1:hprop) (h1':hprop) (h2:hprop). (h1 |-- h1') ==> (h1 ** h2 |-- h1' ** h2)"
    ),
    "hexists-monotone": (
        "forall (P:'a -> hprop) (Q:'a -> hprop). "
        "(forall (x:'a). P x |-- Q x) ==> (hexists P |-- hexists Q)"
    ),
    "pure-lifting": "forall (p:bool) (h:hprop). pure p && h -|- fact p ** h",
    "hentail-refl": "forall (h:hprop). h |-- h",
    "hentail-trans": (
        "forall (h1:hprop) (h2:hprop) (h3:hprop). (h1 |-- h2) ==> (h2 |-- h3) ==> (h1 |-- h3)"
    ),
    "hentail-antisym": (
        "forall (h1:hprop) (h2:hprop). (h1 |-- h2) ==> (h2 |-- h1) ==> (h1 -|- h2)"
    ),
    "hsep-emp-left": "forall (h:hprop). emp ** h -|- h",
    "hsep-emp-right": "forall (h:hprop). h ** emp -|- h",
    "hexists-intro": "forall (P:'a -> hprop) (x:'a). P x |-- hexists P",
    "hexists-elim": (
        "forall (P:'a -> hprop) (h:hprop). (forall (x:'a). P x |-- h) ==> (hexists P |-- h)"
    ),
    "hexists-sep": (
        "forall (P:'a -> hprop) (h:hprop). hexists P ** h -|- hexists (\\(x:'a). P x ** h)"
    ),
    "fact-intro": "forall (p:bool) (h:hprop). p ==> (h |-- fact p ** h)",
    "fact-elim": (
        "forall (p:bool) (h:hprop) (h':hprop). (p ==> (h |-- h')) ==> (fact p ** h |-- h')"
    ),
    "fact-drop": "forall (p:bool) (h:hprop). fact p ** h |-- h",
    "fact-keep": (
        "forall (p:bool) (h:hprop) (h':hprop). (p ==> (h |-- h')) ==> (fact p ** h |-- fact p ** h')"
    ),
    "data-at-undef": (
        "forall (x:integer) (ty:ctype) (v:integer). data_at(x, ty, v) |-- undef_data_at(x, ty)"
    ),
    "malloc-at-null": "forall (p:integer) (n:integer). p == &0 ==> (malloc_at(p, n) -|- emp)",
    "malloc-at-nonnull": (
        "forall (p:integer) (n:integer). p != &0 ==> "
        "(malloc_at(p, n) -|- undef_array_at(p, Tchar, n))"
    ),
    "replicate-zero": "forall (v:'a). replicate(&0, v) == (nil : list 'a)",
    "replicate-succ": (
        "forall (n:integer) (v:'a). n >= &0 ==> replicate(n + &1, v) == cons(v, replicate(n, v))"
    ),
    "cons-not-nil": "forall (x:'a) (l:list 'a). cons(x, l) != nil",
    "fold-right-nil": "forall (f:'a -> 'b -> 'b) (b:'b). fold_right(f, (nil : list 'a), b) == b",
    "fold-right-cons": (
        "forall (f:'a -> 'b -> 'b) (x:'a) (l:list 'a) (b:'b). "
        "fold_right(f, cons(x, l), b) == f x (fold_right(f, l, b))"
    ),
}

ARRAY_LEMMAS = {
    "undef_array_at_select_first": (
        "forall (a:integer) (ty:ctype) (n:integer). n > &0 ==> "
        "(undef_array_at(a, ty, n) |-- undef_data_at(a, ty) ** "
        "undef_array_at(a + sizeof(ty), ty, n - &1))"
    ),
    "undef_array_at_destruct": (
        "forall (a:integer) (ty:ctype) (n:integer). n > &0 ==> "
        "(undef_array_at(a, ty, n) -|- undef_data_at(a, ty) ** "
        "undef_array_at(a + sizeof(ty), ty, n - &1))"
    ),
    "array_at_snoc": (
        "forall (a:integer) (ty:ctype) (n:integer) (v:integer). n >= &0 ==> "
        "(array_at(a, ty, replicate(n, v)) ** data_at(a + n * sizeof(ty), ty, v) |-- "
        "array_at(a, ty, replicate(n + &1, v)))"
    ),
    "array_at_cons": (
        "forall (a:integer) (ty:ctype) (v:integer) (l:int_list). "
        "array_at(a, ty, cons(v, l)) -|- data_at(a, ty, v) ** array_at(a + sizeof(ty), ty, l)"
    ),
    "array_at_nil": "forall (a:integer) (ty:ctype). array_at(a, ty, nil) -|- emp",
    "undef_array_at_nil": "forall (a:integer) (ty:ctype). undef_array_at(a, ty, &0) -|- emp",
}


def register_theory(registry: Registry) -> None:
    """Add the separation-logic constants, definitions and axioms to registry.

    Raises:
        KernelError: If the theory (or one of its names) is already registered
    """
    if THEORY_NAME in registry.theories or registry.is_constant("emp"):
        raise KernelError("separation-logic theory is already registered")
    for name, ty in CONSTANTS.items():
        registry.new_constant(name, ty)
    for name in CTYPES:
        registry.new_constant(name, CTYPE)
    env = SyntaxEnv(registry)
    for name, body in DEFINITIONS.items():
        registry.define(name, parse_term(body, env))
    for name, info in CTYPES.items():
        registry.new_axiom(f"sizeof-{name}", parse_term(f"sizeof({name}) == &{info.size}", env))
    for tag, text in {**STRUCTURAL_AXIOMS, **ARRAY_LEMMAS}.items():
        registry.new_axiom(tag, parse_term(text, env, BOOL))
    registry.theories.append(THEORY_NAME)
    logger.debug(
        f"registered separation-logic theory: {len(CONSTANTS)} constants, "
        f"{len(registry.axioms)} axioms"
    )


def sizeof_equations(registry: Registry) -> Dict[str, Theorem]:
    """The registered `sizeof(T) == &n` axioms, keyed by ctype name."""
    return {name: registry.axiom(f"sizeof-{name}") for name in CTYPES}


def specialize(th: Theorem, args: Sequence[Term]) -> Theorem:
    """Instantiate the leading universal quantifiers of th with args, in order."""
    bound, _ = strip_forall(th.concl)
    if len(args) != len(bound):
        raise RuleError(f"lemma expects {len(bound)} arguments, got {len(args)}")
    for arg in args:
        th = rules.spec(arg, th)
    return th


def unfold_definition(registry: Registry, name: str, args: Sequence[Term]) -> Theorem:
    """|- c a1 .. an = body[a1 .. an] for a defined constant c."""
    th = registry.definition(name)
    for arg in args:
        th = rules.mk_comb_rule(th, rules.refl(arg))
        _, redex = dest_eq(th.concl)
        th = rules.trans(th, rules.beta(redex))
    return th


def array_lemma(registry: Registry, name: str, instantiation: Sequence[Term]) -> Theorem:
    """Instance of a library lemma, or the unfolding of a user-defined predicate.

    Args:
        registry (Registry): Registry the theory was registered in
        name (str): Lemma name, or the name of a defined predicate
        instantiation (list): Terms for the lemma's quantified variables

    Returns:
        Theorem: The instantiated lemma, carrying the lemma's axiom tag
    """
    if name in ARRAY_LEMMAS:
        return specialize(registry.axiom(name), instantiation)
    if name in registry.definitions:
        return unfold_definition(registry, name, instantiation)
    raise KernelError(f"unknown lemma {name}")


def library_lemma_names() -> List[str]:
    return list(ARRAY_LEMMAS)

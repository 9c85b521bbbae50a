"""
CStar - Symbolic Heaps

A symbolic heap is `exists x1 .. xk. fact P1 ** .. ** fact Pm ** Q1 ** .. ** Qn`:
existential binders outside, pure facts first, then spatial conjuncts, all
right-associated. canonicalize turns any heap proposition into this shape;
the proof library's sep_normalize proves the same transformation.
"""

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Set, Tuple

from cstar.kernel.terms import (
    App,
    Const,
    Term,
    Var,
    all_var_names,
    dest_binop,
    dest_hexists,
    dest_sep,
    frees,
    list_mk_hexists,
    list_mk_sep,
    variant_name,
    vsubst,
)
from cstar.kernel.types import BOOL, HPROP, fun_ty

FACT = Const("fact", fun_ty(BOOL, HPROP))
PRIMITIVE_PREDICATES = ("data_at", "undef_data_at")


def mk_fact(p: Term) -> Term:
    return App(FACT, p)


def dest_fact(t: Term) -> Optional[Term]:
    if isinstance(t, App) and t.fn == FACT:
        return t.arg
    return None


def dest_pure_and(t: Term) -> Optional[Tuple[Term, Term]]:
    """(p, h) for `pure p && h` on heap propositions."""
    parts = dest_binop("hand", t)
    if parts is None:
        return None
    left, right = parts
    if isinstance(left, App) and isinstance(left.fn, Const) and left.fn.name == "pure":
        return left.arg, right
    return None


def is_emp(t: Term) -> bool:
    return isinstance(t, Const) and t.name == "emp"


def dest_maps_to(t: Term) -> Optional[Tuple[str, Term, Term, Optional[Term]]]:
    """(predicate, address, ctype, value) of a primitive maps-to conjunct."""
    fn, args = t, []
    while isinstance(fn, App):
        args.insert(0, fn.arg)
        fn = fn.fn
    if not isinstance(fn, Const):
        return None
    if fn.name == "data_at" and len(args) == 3:
        return fn.name, args[0], args[1], args[2]
    if fn.name == "undef_data_at" and len(args) == 2:
        return fn.name, args[0], args[1], None
    return None


@dataclass
class SymHeap:
    binders: List[Var] = field(default_factory=list)
    pures: List[Term] = field(default_factory=list)
    spatials: List[Term] = field(default_factory=list)

    def to_term(self) -> Term:
        body = list_mk_sep([mk_fact(p) for p in self.pures] + list(self.spatials))
        return list_mk_hexists(self.binders, body)

    def copy(self) -> "SymHeap":
        return SymHeap(list(self.binders), list(self.pures), list(self.spatials))

    def names(self) -> Set[str]:
        """Every variable name used by the heap, bound or free."""
        return all_var_names(self.to_term())

    def free_vars(self) -> Set[Var]:
        return set(frees(self.to_term()))

    def body_term(self) -> Term:
        return list_mk_sep([mk_fact(p) for p in self.pures] + list(self.spatials))

    def with_fact(self, p: Term) -> "SymHeap":
        return SymHeap(list(self.binders), self.pures + [p], list(self.spatials))

    def is_canonical(self) -> bool:
        names = [v.name for v in self.binders]
        if len(set(names)) != len(names):
            return False
        body_frees = frees(self.body_term())
        outside = {v.name for v in body_frees if v not in self.binders}
        if outside & set(names):
            return False
        return all(
            dest_fact(s) is None and not is_emp(s) and dest_sep(s) is None
            and dest_hexists(s) is None and dest_pure_and(s) is None
            for s in self.spatials
        )

    def __str__(self) -> str:
        from cstar.quote.printer import print_term

        return print_term(self.to_term())


def canonicalize(t: Term, avoid: Iterable[str] = ()) -> SymHeap:
    """Symbolic-heap form of a heap proposition.

    Existentials are extruded outermost in the order they are met, `pure p && h`
    becomes a fact, emp units disappear, and facts move in front of spatial
    conjuncts keeping their relative order. Binders are renamed only when they
    clash with avoid, with each other, or with free variables of t.

    Args:
        t (Term): A term of type hprop
        avoid (iterable): Names binders must not take

    Returns:
        SymHeap: The canonical form
    """
    used = {v.name for v in frees(t)} | set(avoid)
    heap = SymHeap()

    def walk(cur: Term) -> None:
        found = dest_hexists(cur)
        if found is not None:
            v, body = found
            name = variant_name(v.name, used)
            used.add(name)
            fresh = Var(name, v.ty)
            heap.binders.append(fresh)
            walk(vsubst({v: fresh}, body) if fresh != v else body)
            return
        parts = dest_sep(cur)
        if parts is not None:
            walk(parts[0])
            walk(parts[1])
            return
        if is_emp(cur):
            return
        pure = dest_fact(cur)
        if pure is not None:
            heap.pures.append(pure)
            return
        hand = dest_pure_and(cur)
        if hand is not None:
            heap.pures.append(hand[0])
            walk(hand[1])
            return
        heap.spatials.append(cur)

    walk(t)
    return heap


def strip_binders(heap: SymHeap, avoid: Iterable[str]) -> Tuple[SymHeap, List[Var]]:
    """Rename the binders of heap apart from avoid; returns the heap and the new binders."""
    used = set(avoid) | {v.name for v in frees(heap.to_term())}
    theta = {}
    fresh_binders = []
    for v in heap.binders:
        name = variant_name(v.name, used)
        used.add(name)
        fresh = Var(name, v.ty)
        fresh_binders.append(fresh)
        if fresh != v:
            theta[v] = fresh
    renamed = SymHeap(
        fresh_binders,
        [vsubst(theta, p) for p in heap.pures],
        [vsubst(theta, s) for s in heap.spatials],
    )
    return renamed, fresh_binders

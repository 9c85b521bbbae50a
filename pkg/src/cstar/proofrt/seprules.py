"""
CStar - Separation Logic Proof Library

Derived rules over the separation-logic axioms: commutation and lifting of
separating conjuncts, normalization to symbolic-heap form, reordering, and
local application of a heap transformation to a symbolic state.

Everything here composes kernel rules; the only trusted steps are instances
of registered axioms and, in local_apply, arithmetic facts decided by the
oracle.
"""

import logging
from typing import List, Optional, Sequence, Tuple

from cstar.errors import ArithError, RuleError
from cstar.kernel import thm as rules
from cstar.kernel.registry import Registry
from cstar.kernel.terms import (
    EMP,
    ENTAIL,
    SEP,
    Abs,
    App,
    Term,
    Var,
    alpha_eq,
    binder_const,
    dest_binop,
    dest_entail,
    dest_forall,
    dest_hexists,
    dest_imp,
    dest_sep,
    flatten_sep,
    frees,
    list_mk_sep,
    mk_imp,
    mk_sep,
    strip_forall,
    variant_name,
    vsubst,
)
from cstar.kernel.thm import Theorem
from cstar.kernel.types import INTEGER
from cstar.proofrt.conv import instantiate_equation, sides
from cstar.quote.printer import print_term
from cstar.seplogic.arith import ArithOracle, arith_equal, get_oracle
from cstar.seplogic.matching import instantiate, match_term
from cstar.symexec.entail import match_conjuncts
from cstar.symexec.symheap import canonicalize, dest_fact, dest_pure_and, is_emp, mk_fact

logger = logging.getLogger(__name__)


def strip_hexists(t: Term) -> Tuple[List[Var], Term]:
    binders: List[Var] = []
    while True:
        found = dest_hexists(t)
        if found is None:
            return binders, t
        binders.append(found[0])
        t = found[1]


def rhs(th: Theorem) -> Term:
    return sides(th, "rhs")[1]


def find_permutation(source: Sequence[Term], target: Sequence[Term]) -> Optional[List[int]]:
    """order with source[order[i]] alpha-equal to target[i], or None."""
    if len(source) != len(target):
        return None
    used: List[int] = []
    for t in target:
        pick = next(
            (i for i, s in enumerate(source) if i not in used and alpha_eq(s, t)), None
        )
        if pick is None:
            return None
        used.append(pick)
    return used


class SepLib:
    """Derived separation-logic rules over one registry.

    Args:
        registry (Registry): Registry holding the separation-logic theory
        oracle (ArithOracle, optional): Oracle for arithmetic side goals
    """

    def __init__(self, registry: Registry, oracle: Optional[ArithOracle] = None):
        self.registry = registry
        self.oracle = oracle or get_oracle(registry)

    # -- axiom instances ------------------------------------------------------

    def ax(self, tag: str, *args: Term) -> Theorem:
        th = self.registry.axiom(tag)
        for arg in args:
            th = rules.spec(arg, th)
        return th

    def entail_refl(self, h: Term) -> Theorem:
        return self.ax("hentail-refl", h)

    def entail_of_eq(self, th: Theorem) -> Theorem:
        """From |- A -|- B conclude |- A |-- B."""
        left, _ = sides(th, "entail_of_eq")
        step = rules.mk_comb_rule(rules.refl(App(ENTAIL, left)), th)
        return rules.eq_mp(step, self.entail_refl(left))

    def entail_trans(self, th1: Theorem, th2: Theorem) -> Theorem:
        first = dest_entail(th1.concl)
        second = dest_entail(th2.concl)
        if first is None or second is None:
            raise RuleError("entail_trans: both theorems must be entailments")
        step = self.ax("hentail-trans", first[0], first[1], second[1])
        return rules.mp(rules.mp(step, th1), th2)

    def sep_congr(self, th_left: Theorem, th_right: Theorem) -> Theorem:
        return rules.mk_comb_rule(rules.mk_comb_rule(rules.refl(SEP), th_left), th_right)

    def under_hexists(self, th: Theorem, v: Var) -> Theorem:
        """From |- B -|- B' conclude |- (hexists v. B) -|- (hexists v. B')."""
        return rules.mk_comb_rule(
            rules.refl(binder_const("hexists", v.ty)), rules.abs_rule(v, th)
        )

    # -- commutation and lifting ---------------------------------------------

    def comm(self, a: Term, b: Term) -> Theorem:
        return self.ax("hsep-comm", a, b)

    def move(self, a: Term, t: Term, b: Term) -> Theorem:
        """|- a ** t ** b -|- t ** a ** b."""
        regroup = rules.symm(self.ax("hsep-assoc", a, t, b))
        swap = rules.mk_comb_rule(rules.mk_comb_rule(rules.refl(SEP), self.comm(a, t)), rules.refl(b))
        return rules.trans(regroup, rules.trans(swap, self.ax("hsep-assoc", t, a, b)))

    def hsep_comm(self, t: Term) -> Theorem:
        """|- forall hp. t ** hp -|- hp ** t."""
        hp = Var(variant_name("hp", {v.name for v in frees(t)}), t.ty)
        return rules.gen(hp, rules.spec(hp, self.ax("hsep-comm", t)))

    def hsep_move(self, t: Term) -> Theorem:
        """|- forall hp1 hp2. hp1 ** t ** hp2 -|- t ** hp1 ** hp2."""
        avoid = {v.name for v in frees(t)}
        hp1 = Var(variant_name("hp1", avoid), t.ty)
        hp2 = Var(variant_name("hp2", avoid | {hp1.name}), t.ty)
        return rules.gen(hp1, rules.gen(hp2, self.move(hp1, t, hp2)))

    def flatten(self, t: Term) -> Theorem:
        """|- t -|- t' with t' the right-associated form of t."""
        parts = dest_sep(t)
        if parts is None:
            return rules.refl(t)
        left, right = parts
        inner = dest_sep(left)
        if inner is not None:
            step = self.ax("hsep-assoc", inner[0], inner[1], right)
            return rules.trans(step, self.flatten(rhs(step)))
        return self.sep_congr(rules.refl(left), self.flatten(right))

    def lift_index(self, conjuncts: Sequence[Term], k: int) -> Theorem:
        """Move conjunct k of a right-associated list to the front."""
        if k == 0:
            return rules.refl(list_mk_sep(list(conjuncts)))
        if len(conjuncts) == 2:
            return self.comm(conjuncts[0], conjuncts[1])
        tail = list(conjuncts[1:])
        lifted = self.sep_congr(rules.refl(conjuncts[0]), self.lift_index(tail, k - 1))
        rest = list_mk_sep([c for i, c in enumerate(tail) if i != k - 1])
        return rules.trans(lifted, self.move(conjuncts[0], conjuncts[k], rest))

    def permute(self, conjuncts: Sequence[Term], order: Sequence[int]) -> Theorem:
        """|- c1 ** .. ** cn -|- c[order[0]] ** .. ** c[order[n-1]]."""
        if len(conjuncts) <= 1:
            return rules.refl(list_mk_sep(list(conjuncts)))
        first = order[0]
        lifted = self.lift_index(conjuncts, first)
        remaining = [i for i in range(len(conjuncts)) if i != first]
        inner = self.permute(
            [conjuncts[i] for i in remaining], [remaining.index(o) for o in order[1:]]
        )
        return rules.trans(lifted, self.sep_congr(rules.refl(conjuncts[first]), inner))

    def replace_at(self, conjuncts: Sequence[Term], k: int, th: Theorem) -> Theorem:
        """Rewrite conjunct k of a right-associated list with |- ck -|- ck'."""
        if k == 0:
            if len(conjuncts) == 1:
                return th
            return self.sep_congr(th, rules.refl(list_mk_sep(list(conjuncts[1:]))))
        return self.sep_congr(rules.refl(conjuncts[0]), self.replace_at(conjuncts[1:], k - 1, th))

    def sep_lift(self, target: Term, t: Term) -> Theorem:
        """|- t -|- target ** rest, with the conjuncts of target lifted to the left.

        Raises:
            RuleError: If a conjunct of target is not a conjunct of t
        """
        wanted = flatten_sep(target)
        th = self.flatten(t)
        conjuncts = flatten_sep(rhs(th))
        picked: List[int] = []
        for atom in wanted:
            pick = next(
                (i for i, c in enumerate(conjuncts) if i not in picked and alpha_eq(c, atom)), None
            )
            if pick is None:
                raise RuleError(f"sep_lift: {print_term(atom)} is not a conjunct of {print_term(t)}")
            picked.append(pick)
        current = list(range(len(conjuncts)))
        for index in reversed(picked):
            th = rules.trans(th, self.lift_index([conjuncts[i] for i in current], current.index(index)))
            current = [index] + [i for i in current if i != index]
        if len(wanted) == 1:
            return th
        others = [conjuncts[i] for i in current[len(wanted):]]
        grouped = mk_sep(target, list_mk_sep(others)) if others else target
        return rules.trans(th, rules.symm(self.flatten(grouped)))

    # -- normal forms ---------------------------------------------------------

    def _drop_emp(self, conjuncts: Sequence[Term], k: int) -> Theorem:
        lifted = self.lift_index(conjuncts, k)
        rest = list_mk_sep([c for i, c in enumerate(conjuncts) if i != k])
        return rules.trans(lifted, self.ax("hsep-emp-left", rest))

    def _extrude(self, conjuncts: Sequence[Term], k: int) -> Theorem:
        if len(conjuncts) == 1:
            v, body = dest_hexists(conjuncts[0])
            return self.under_hexists(self.structure(body), v)
        lifted = self.lift_index(conjuncts, k)
        rest = list_mk_sep([c for i, c in enumerate(conjuncts) if i != k])
        pulled = self.ax("hexists-sep", conjuncts[k].arg, rest)
        lam = rhs(pulled).arg
        reduced = self.sep_congr(rules.beta(lam.body.fn.arg), rules.refl(rest))
        inner = self.structure(rhs(reduced))
        return rules.trans(
            lifted,
            rules.trans(
                pulled,
                rules.trans(self.under_hexists(reduced, lam.bvar), self.under_hexists(inner, lam.bvar)),
            ),
        )

    def structure(self, t: Term) -> Theorem:
        """|- t -|- hexists xs. a1 ** .. ** an with every ai a fact or a spatial atom."""
        th = self.flatten(t)
        while True:
            conjuncts = flatten_sep(rhs(th))
            for k, c in enumerate(conjuncts):
                if dest_hexists(c) is not None:
                    return rules.trans(th, self._extrude(conjuncts, k))
                lifted = dest_pure_and(c)
                if lifted is not None:
                    step = self.replace_at(conjuncts, k, self.ax("pure-lifting", *lifted))
                    th = rules.trans(th, step)
                    th = rules.trans(th, self.flatten(rhs(th)))
                    break
                if is_emp(c) and len(conjuncts) > 1:
                    th = rules.trans(th, self._drop_emp(conjuncts, k))
                    break
            else:
                return th

    def sep_normalize(self, t: Term) -> Theorem:
        """|- t -|- canonical symbolic-heap form of t."""
        th = self.structure(t)
        heap = canonicalize(t)
        binders, body = strip_hexists(rhs(th))
        if len(binders) != len(heap.binders):
            raise RuleError(f"sep_normalize: unexpected binder structure in {print_term(t)}")
        atoms = flatten_sep(body)
        target = [mk_fact(p) for p in heap.pures] + list(heap.spatials)
        if target:
            renaming = dict(zip(binders, heap.binders))
            order = find_permutation([vsubst(renaming, a) for a in atoms], target)
            if order is None:
                raise RuleError(f"sep_normalize: cannot order the conjuncts of {print_term(t)}")
            step = self.permute(atoms, order)
            for v in reversed(binders):
                step = self.under_hexists(step, v)
            th = rules.trans(th, step)
        return rules.trans(th, rules.refl(heap.to_term()))

    def sep_reorder(self, t1: Term, t2: Term) -> Optional[Theorem]:
        """|- t1 -|- t2 when t2 reorders the conjuncts of t1, else None."""
        xs1, body1 = strip_hexists(t1)
        xs2, body2 = strip_hexists(t2)
        if len(xs1) != len(xs2) or any(a.ty != b.ty for a, b in zip(xs1, xs2)):
            return None
        if {v.name for v in xs1} & {v.name for v in frees(t2)}:
            return None
        body2 = vsubst(dict(zip(xs2, xs1)), body2)
        flat1, flat2 = self.flatten(body1), self.flatten(body2)
        atoms1, atoms2 = flatten_sep(rhs(flat1)), flatten_sep(rhs(flat2))
        order = find_permutation(atoms1, atoms2)
        if order is None:
            return None
        th = rules.trans(flat1, rules.trans(self.permute(atoms1, order), rules.symm(flat2)))
        for v in reversed(xs1):
            th = self.under_hexists(th, v)
        return rules.trans(th, rules.refl(t2))

    # -- entailment rules ------------------------------------------------------

    def sep_cancel(self, th: Theorem, frame: Term) -> Theorem:
        """From |- h1 |-- h1' conclude |- h1 ** frame |-- h1' ** frame."""
        parts = dest_entail(th.concl)
        if parts is None:
            raise RuleError("sep_cancel: theorem is not an entailment")
        return rules.mp(self.ax("hsep-cancel-right", parts[0], parts[1], frame), th)

    def sep_frame(self, frame: Term, th: Theorem) -> Theorem:
        """From |- h2 |-- h2' conclude |- frame ** h2 |-- frame ** h2'."""
        parts = dest_entail(th.concl)
        if parts is None:
            raise RuleError("sep_frame: theorem is not an entailment")
        left, right = parts
        cancelled = self.sep_cancel(th, frame)
        before = self.entail_of_eq(self.comm(frame, left))
        after = self.entail_of_eq(self.comm(right, frame))
        return self.entail_trans(before, self.entail_trans(cancelled, after))

    def exists_mono(self, v: Var, th: Theorem) -> Theorem:
        """From |- B |-- B' (v free) conclude |- (hexists v. B) |-- (hexists v. B')."""
        parts = dest_entail(th.concl)
        if parts is None:
            raise RuleError("exists_mono: theorem is not an entailment")
        p, q = Abs(v, parts[0]), Abs(v, parts[1])
        step = self.ax("hexists-monotone", p, q)
        unfold = rules.mk_comb_rule(
            rules.mk_comb_rule(rules.refl(ENTAIL), rules.beta(App(p, v))), rules.beta(App(q, v))
        )
        pointwise = rules.gen(v, rules.eq_mp(rules.symm(unfold), th))
        return rules.mp(step, pointwise)

    def hexists_intro(self, t: Term, witness: Term) -> Theorem:
        """|- B[witness] |-- hexists x. B for t = hexists x. B."""
        if dest_hexists(t) is None:
            raise RuleError("hexists_intro: term is not an existential")
        step = self.ax("hexists-intro", t.arg, witness)
        reduce = rules.beta(App(t.arg, witness))
        return self.entail_trans(self.entail_of_eq(rules.symm(reduce)), step)

    def hexists_elim(self, t: Term, th: Theorem) -> Theorem:
        """From |- B |-- h (or its generalization) conclude |- (hexists x. B) |-- h."""
        found = dest_hexists(t)
        if found is None:
            raise RuleError("hexists_elim: term is not an existential")
        v, _ = found
        if dest_forall(th.concl) is not None:
            th = rules.spec(v, th)
        parts = dest_entail(th.concl)
        if parts is None:
            raise RuleError("hexists_elim: theorem is not an entailment")
        h = parts[1]
        unfold = rules.mk_comb_rule(
            rules.mk_comb_rule(rules.refl(ENTAIL), rules.beta(App(t.arg, v))), rules.refl(h)
        )
        pointwise = rules.gen(v, rules.eq_mp(rules.symm(unfold), th))
        return rules.mp(self.ax("hexists-elim", t.arg, h), pointwise)

    def fact_intro(self, th: Theorem, h: Term) -> Theorem:
        """From |- p conclude |- h |-- fact p ** h."""
        return rules.mp(self.ax("fact-intro", th.concl, h), th)

    def _fact_rule(self, tag: str, th: Theorem) -> Theorem:
        parts = dest_imp(th.concl)
        inner = dest_entail(parts[1]) if parts else None
        if inner is None:
            raise RuleError(f"{tag}: theorem must conclude p ==> (h |-- h')")
        return rules.mp(self.ax(tag, parts[0], inner[0], inner[1]), th)

    def fact_elim(self, th: Theorem) -> Theorem:
        """From |- p ==> (h |-- h') conclude |- fact p ** h |-- h'."""
        return self._fact_rule("fact-elim", th)

    def fact_keep(self, th: Theorem) -> Theorem:
        """From |- p ==> (h |-- h') conclude |- fact p ** h |-- fact p ** h'."""
        return self._fact_rule("fact-keep", th)

    # -- local application ----------------------------------------------------

    def arith_congruence(self, a: Term, b: Term) -> Theorem:
        """|- a = b for terms that differ only in arithmetically equal integer subterms."""
        if alpha_eq(a, b):
            return rules.refl(a)
        if a.ty == INTEGER and b.ty == INTEGER and arith_equal(a, b):
            return self.oracle.prove_equal(a, b)
        if isinstance(a, App) and isinstance(b, App):
            return rules.mk_comb_rule(self.arith_congruence(a.fn, b.fn), self.arith_congruence(a.arg, b.arg))
        raise RuleError(f"cannot identify {print_term(a)} with {print_term(b)}")

    def _transform_parts(self, transform: Theorem, spatials: Sequence[Term]):
        bound, core = strip_forall(transform.concl)
        premises: List[Term] = []
        while dest_imp(core) is not None:
            premise, core = dest_imp(core)
            premises.append(premise)
        entail = dest_entail(core) or dest_binop("-|-", core)
        if entail is None:
            raise RuleError("local_apply: transform must conclude L |-- R, L -|- R or P ==> ... ==> (L |-- R)")
        if bound:
            pattern = flatten_sep(entail[0])
            match = next(iter(match_conjuncts(pattern, spatials, bound, exact=False)), None)
            if match is None:
                raise RuleError(
                    f"local_apply: no part of the state matches {print_term(entail[0])}"
                )
            return self._transform_parts(instantiate_equation(transform, match[0], bound), spatials)
        return transform, premises, entail[0], entail[1], dest_entail(core) is None

    def local_apply(self, state: Term, transform: Theorem) -> Theorem:
        """|- state |-- state', replacing the part L of state by R.

        Args:
            state (Term): A symbolic heap
            transform (Theorem): Concludes L |-- R, L -|- R or P ==> (L |-- R);
                universally quantified variables are found by matching L against
                the state, and P must follow from the facts of the state

        Returns:
            Theorem: The entailment from state to the transformed state
        """
        prefix = None
        canonical = canonicalize(state).to_term()
        if not alpha_eq(canonical, state):
            normal = self.sep_normalize(state)
            prefix = self.entail_of_eq(normal)
            state = rhs(normal)
        binders, body = strip_hexists(state)
        result = self._apply_in_body(body, transform)
        for v in reversed(binders):
            result = self.exists_mono(v, result)
        if prefix is not None:
            result = self.entail_trans(prefix, result)
        return result

    def _apply_in_body(self, body: Term, transform: Theorem) -> Theorem:
        conjuncts = flatten_sep(body)
        facts: List[Term] = []
        while len(facts) < len(conjuncts) and dest_fact(conjuncts[len(facts)]) is not None:
            facts.append(dest_fact(conjuncts[len(facts)]))
        spatials = conjuncts[len(facts):]
        transform, premises, left, right, is_eq = self._transform_parts(transform, spatials)
        for premise in premises:
            try:
                proved = self._from_facts(facts, premise)
            except ArithError as exc:
                raise RuleError(
                    f"local_apply: cannot discharge {print_term(premise)} from the facts of the state"
                ) from exc
            transform = rules.mp(transform, proved)
        if is_eq:
            transform = self.entail_of_eq(transform)

        matched: List[int] = []
        atoms = flatten_sep(left)
        for atom in atoms:
            pick = next(
                (j for j, s in enumerate(spatials) if j not in matched and alpha_eq(atom, s)), None
            )
            if pick is None:
                pick = next(
                    (j for j, s in enumerate(spatials)
                     if j not in matched and _arith_variant(atom, s)),
                    None,
                )
            if pick is None:
                raise RuleError(f"local_apply: no conjunct matching {print_term(atom)}")
            matched.append(pick)
        located = list_mk_sep([spatials[j] for j in matched])
        congruence = rules.trans(
            self.flatten(left), self._congruence_list(atoms, [spatials[j] for j in matched])
        )
        transform = self.entail_trans(self.entail_of_eq(rules.symm(congruence)), transform)

        spatial_term = list_mk_sep(list(spatials))
        lifted = self.sep_lift(located, spatial_term)
        others = [s for j, s in enumerate(spatials) if j not in matched]
        if others:
            transform = self.sep_cancel(transform, list_mk_sep(others))
        result = self.entail_trans(self.entail_of_eq(lifted), transform)
        result = self.entail_trans(result, self.entail_of_eq(self._in_place(result, spatials, matched, right)))

        for p in reversed(facts):
            result = self.fact_keep(rules.disch(p, result))
        return result

    def _congruence_list(self, atoms: Sequence[Term], found: Sequence[Term]) -> Theorem:
        if len(atoms) == 1:
            return self.arith_congruence(atoms[0], found[0])
        return self.sep_congr(
            self.arith_congruence(atoms[0], found[0]), self._congruence_list(atoms[1:], found[1:])
        )

    def _in_place(self, th: Theorem, spatials: Sequence[Term], matched: Sequence[int], right: Term) -> Theorem:
        """Reorder R ** frame so that R sits where the first matched conjunct was."""
        current = dest_entail(th.concl)[1]
        step = self.flatten(current)
        atoms = flatten_sep(rhs(step))
        while len(atoms) > 1 and any(is_emp(a) for a in atoms):
            step = rules.trans(step, self._drop_emp(atoms, next(i for i, a in enumerate(atoms) if is_emp(a))))
            atoms = flatten_sep(rhs(step))
        replacement = [a for a in flatten_sep(right) if not is_emp(a)]
        target: List[Term] = []
        for j, s in enumerate(spatials):
            if j == matched[0]:
                target.extend(replacement)
            elif j not in matched:
                target.append(s)
        if not target:
            return step
        order = find_permutation(atoms, target)
        if order is None:
            return step
        return rules.trans(step, self.permute(atoms, order))

    # -- entailment search ------------------------------------------------------

    def bridge(self, a: Term, b: Term) -> Theorem:
        """|- a -|- b for heaps with the same symbolic-heap form."""
        if alpha_eq(a, b):
            return rules.refl(a)
        return rules.trans(self.sep_normalize(a), rules.symm(self.sep_normalize(b)))

    def _from_facts(self, facts: Sequence[Term], goal: Term, lemmas: Sequence[Theorem] = ()) -> Theorem:
        """facts |- goal: a fact itself, a supplied lemma, reflexivity, or the oracle."""
        if any(alpha_eq(goal, p) for p in facts):
            return rules.assume(goal)
        for lemma in lemmas:
            if alpha_eq(lemma.concl, goal):
                return lemma
        equation = dest_binop("=", goal)
        if equation is not None and alpha_eq(*equation):
            return rules.refl(equation[0])
        formula = goal
        for p in reversed(facts):
            formula = mk_imp(p, formula)
        proved = self.oracle.prove(formula)
        for p in facts:
            proved = rules.mp(proved, rules.assume(p))
        return proved

    def sep_solve(self, lhs: Term, target: Term, lemmas: Sequence[Theorem] = ()) -> Theorem:
        """|- lhs |-- target when the spatial conjuncts correspond.

        Existential witnesses of target are found by matching its spatial
        conjuncts against those of lhs modulo arithmetic, and the facts of
        target must follow from the facts of lhs. A lemma whose conclusion is
        one of those facts is used as is; its hypotheses must be facts of lhs.

        Raises:
            RuleError: If no correspondence closes the entailment
        """
        left_norm = self.sep_normalize(lhs)
        right_norm = self.sep_normalize(target)
        xs, left_body = strip_hexists(rhs(left_norm))
        goal = rhs(right_norm)
        if {v.name for v in xs} & {v.name for v in frees(goal)}:
            raise RuleError("sep_solve: existential of the left side clashes with a variable of the right side")
        ys, goal_body = strip_hexists(goal)
        facts, spatials = _split_facts(flatten_sep(left_body))
        wanted, patterns = _split_facts(flatten_sep(goal_body))
        for match, used in match_conjuncts(patterns, spatials, ys, exact=True):
            pending = [instantiate(g, match) for g in wanted]
            if any(set(frees(p)) & (set(ys) - set(match[0])) for p in pending):
                continue
            try:
                proofs = [self._from_facts(facts, p, lemmas) for p in pending]
            except ArithError:
                continue
            body = self._solve_body(facts, spatials, [instantiate(p, match) for p in patterns], used, proofs)
            witnesses = [match[0].get(y, y) for y in ys]
            th = self._intro_all(body, goal, witnesses)
            levels: List[Term] = []
            t = rhs(left_norm)
            while dest_hexists(t) is not None:
                levels.append(t)
                t = dest_hexists(t)[1]
            for level in reversed(levels):
                th = self.hexists_elim(level, th)
            th = self.entail_trans(self.entail_of_eq(left_norm), th)
            return self.entail_trans(th, self.entail_of_eq(rules.symm(right_norm)))
        raise RuleError(f"sep_solve: cannot show {print_term(lhs)} |-- {print_term(target)}")

    def _solve_body(self, facts: Sequence[Term], spatials: Sequence[Term], found: Sequence[Term],
                    used: Sequence[int], proofs: Sequence[Theorem]) -> Theorem:
        """facts ** spatials |-- proved facts ** found, with found[i] ~ spatials[used[i]]."""
        if spatials:
            eq = rules.trans(
                self.permute(spatials, used),
                self._congruence_list([spatials[j] for j in used], found),
            )
        else:
            eq = rules.refl(EMP)
        th = self.entail_of_eq(eq)
        current = rhs(eq)
        for proof in reversed(proofs):
            step = self.fact_intro(proof, current)
            th = self.entail_trans(th, step)
            current = dest_entail(step.concl)[1]
        for p in reversed(facts):
            th = self.fact_elim(rules.disch(p, th))
        left = dest_entail(th.concl)[0]
        body = list_mk_sep([mk_fact(p) for p in facts] + list(spatials))
        return self.entail_trans(self.entail_of_eq(self.bridge(body, left)), th)

    def _intro_all(self, th: Theorem, goal: Term, witnesses: Sequence[Term]) -> Theorem:
        """From |- h |-- B[ws] conclude |- h |-- hexists ys. B."""
        steps: List[Theorem] = []
        t = goal
        for w in witnesses:
            step = self.hexists_intro(t, w)
            steps.append(step)
            t = dest_entail(step.concl)[0]
        reached = dest_entail(th.concl)[1]
        th = self.entail_trans(th, self.entail_of_eq(self.bridge(reached, t)))
        for step in reversed(steps):
            th = self.entail_trans(th, step)
        return th


def _arith_variant(pattern: Term, target: Term) -> bool:
    return match_term(pattern, target, (), arith=True) is not None


def _split_facts(conjuncts: Sequence[Term]) -> Tuple[List[Term], List[Term]]:
    """(facts, spatial conjuncts) of a canonical body."""
    facts = [dest_fact(c) for c in conjuncts if dest_fact(c) is not None]
    return facts, [c for c in conjuncts if dest_fact(c) is None and not is_emp(c)]

"""
CStar - Kernel tests
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cstar.errors import KernelError, RuleError, TermError
from cstar.kernel import (
    Abs,
    App,
    Const,
    Registry,
    Theorem,
    Var,
    abs_rule,
    alpha_eq,
    assume,
    beta,
    deduct_antisym,
    disch,
    eq_mp,
    frees,
    gen,
    inst,
    inst_type,
    mk_comb_rule,
    mp,
    refl,
    spec,
    symm,
    trans,
    vsubst,
)
from cstar.kernel.terms import dest_eq, dest_forall, is_well_typed, mk_eq, mk_forall, mk_imp, mk_int
from cstar.kernel.types import BOOL, INTEGER, TyVar, fun_ty

x = Var("x", INTEGER)
y = Var("y", INTEGER)
z = Var("z", INTEGER)
p = Var("p", BOOL)
q = Var("q", BOOL)
f = Var("f", fun_ty(INTEGER, INTEGER))


def test_theorems_cannot_be_built_directly():
    with pytest.raises(KernelError):
        Theorem((), mk_eq(x, x), frozenset())


def test_theorems_are_immutable():
    th = refl(x)
    with pytest.raises(KernelError):
        th._concl = mk_eq(y, y)


def test_ill_typed_application_is_rejected():
    with pytest.raises(TermError):
        App(x, y)
    with pytest.raises(TermError):
        App(f, p)


def test_refl_trans_symm():
    ax = Registry().new_oracle("test")
    xy = ax(mk_eq(x, y))
    yz = ax(mk_eq(y, z))
    th = trans(xy, yz)
    assert alpha_eq(th.concl, mk_eq(x, z))
    assert th.axioms == frozenset({"test"})
    assert alpha_eq(symm(th).concl, mk_eq(z, x))
    assert refl(x).axioms == frozenset()


def test_trans_requires_matching_middle_terms():
    with pytest.raises(RuleError):
        trans(refl(x), refl(y))


def test_assume_rejects_non_propositions():
    with pytest.raises(RuleError):
        assume(x)


def test_mp_and_disch():
    th = disch(p, assume(p))
    assert alpha_eq(th.concl, mk_imp(p, p))
    assert th.hyps == ()
    out = mp(th, assume(p))
    assert alpha_eq(out.concl, p)
    assert len(out.hyps) == 1
    with pytest.raises(RuleError):
        mp(th, assume(q))
    with pytest.raises(RuleError):
        mp(assume(p), assume(p))


def test_deduct_antisym_and_eq_mp():
    th = deduct_antisym(assume(p), assume(p))
    assert alpha_eq(th.concl, mk_eq(p, p))
    moved = eq_mp(th, assume(p))
    assert alpha_eq(moved.concl, p)
    with pytest.raises(RuleError):
        eq_mp(th, assume(q))


def test_beta_reduces_one_redex():
    redex = App(Abs(x, App(f, x)), mk_int(3))
    th = beta(redex)
    left, right = dest_eq(th.concl)
    assert left == redex
    assert alpha_eq(right, App(f, mk_int(3)))
    with pytest.raises(RuleError):
        beta(App(f, x))


def test_mk_comb_rule():
    th = mk_comb_rule(refl(f), refl(x))
    assert alpha_eq(th.concl, mk_eq(App(f, x), App(f, x)))


def test_gen_and_spec():
    th = gen(x, refl(x))
    assert alpha_eq(th.concl, mk_forall(x, mk_eq(x, x)))
    inst_th = spec(mk_int(5), th)
    assert alpha_eq(inst_th.concl, mk_eq(mk_int(5), mk_int(5)))
    with pytest.raises(RuleError):
        spec(p, th)


def test_gen_rejects_variable_free_in_hypotheses():
    hyp = mk_eq(x, y)
    with pytest.raises(RuleError):
        gen(x, assume(hyp))


def test_spec_instantiates_polymorphic_binder():
    a = Var("a", TyVar("A"))
    th = gen(a, refl(a))
    out = spec(mk_int(1), th)
    assert alpha_eq(out.concl, mk_eq(mk_int(1), mk_int(1)))


def test_inst_substitutes_hypotheses_and_conclusion():
    th = inst({x: mk_int(2)}, assume(mk_eq(x, y)))
    assert alpha_eq(th.concl, mk_eq(mk_int(2), y))
    assert alpha_eq(th.hyps[0], th.concl)


def test_vsubst_avoids_capture():
    body = Abs(y, mk_eq(x, y))
    out = vsubst({x: y}, body)
    assert isinstance(out, Abs)
    assert out.bvar != y
    assert y in frees(out)


def test_vsubst_is_simultaneous():
    out = vsubst({x: y, y: x}, mk_eq(x, y))
    assert alpha_eq(out, mk_eq(y, x))


def test_alpha_equivalence_ignores_bound_names():
    assert alpha_eq(Abs(x, App(f, x)), Abs(y, App(f, y)))
    assert not alpha_eq(Abs(x, App(f, x)), Abs(y, App(f, x)))


def test_registry_rejects_duplicate_and_unknown_names():
    reg = Registry()
    reg.new_constant("c", INTEGER)
    with pytest.raises(KernelError):
        reg.new_constant("c", INTEGER)
    with pytest.raises(KernelError):
        reg.axiom("missing")
    with pytest.raises(KernelError):
        reg.mk_const("c", BOOL)


def test_define_requires_closed_body():
    reg = Registry()
    with pytest.raises(RuleError):
        reg.define("bad", App(f, x))
    th = reg.define("three", mk_int(3))
    assert th.axioms == frozenset()
    assert alpha_eq(th.concl, mk_eq(Const("three", INTEGER), mk_int(3)))


def test_axioms_carry_their_tag():
    reg = Registry()
    th = reg.new_axiom("ax", mk_eq(x, x))
    assert th.axioms == frozenset({"ax"})
    assert reg.axiom("ax") is th
    with pytest.raises(RuleError):
        reg.new_axiom("nonbool", x)


@given(st.integers(min_value=-(10**6), max_value=10**6))
def test_numerals_are_integer_constants(n):
    term = mk_int(n)
    assert term.ty == INTEGER
    assert alpha_eq(refl(term).concl, mk_eq(term, term))


# -- randomized rule applications ---------------------------------------------

a = Var("a", TyVar("A"))
INT_VARS = [x, y, z]
INT_TO_INT = fun_ty(INTEGER, INTEGER)


def random_term(rnd, ty, depth=3):
    """A random well-typed term of type ty over x, y, z, p, q, f and a."""
    if ty == INTEGER:
        if depth <= 0 or rnd.random() < 0.4:
            return rnd.choice(INT_VARS + [mk_int(rnd.randint(0, 3))])
        return App(random_term(rnd, INT_TO_INT, depth - 1), random_term(rnd, INTEGER, depth - 1))
    if ty == INT_TO_INT:
        if depth <= 0 or rnd.random() < 0.5:
            return f
        return Abs(rnd.choice(INT_VARS), random_term(rnd, INTEGER, depth - 1))
    if ty == BOOL:
        if depth <= 0 or rnd.random() < 0.3:
            return rnd.choice([p, q])
        kind = rnd.randrange(4)
        if kind == 0:
            return mk_eq(random_term(rnd, INTEGER, depth - 1), random_term(rnd, INTEGER, depth - 1))
        if kind == 1:
            return mk_imp(random_term(rnd, BOOL, depth - 1), random_term(rnd, BOOL, depth - 1))
        if kind == 2:
            return mk_forall(rnd.choice(INT_VARS), random_term(rnd, BOOL, depth - 1))
        return mk_eq(random_term(rnd, BOOL, depth - 1), random_term(rnd, BOOL, depth - 1))
    return a if ty == a.ty else Var("w", ty)


def random_redex(rnd):
    return App(Abs(rnd.choice(INT_VARS), random_term(rnd, INTEGER, 2)), random_term(rnd, INTEGER, 2))


def apply_random_rule(rnd, pool):
    """One rule application on theorems drawn from pool: (theorem, premises)."""
    th1, th2 = rnd.choice(pool), rnd.choice(pool)
    rule = rnd.randrange(15)
    if rule == 0:
        return refl(random_term(rnd, rnd.choice([INTEGER, BOOL, INT_TO_INT]))), ()
    if rule == 1:
        return assume(random_term(rnd, BOOL)), ()
    if rule == 2:
        return trans(th1, th2), (th1, th2)
    if rule == 3:
        return symm(th1), (th1,)
    if rule == 4:
        return eq_mp(th1, th2), (th1, th2)
    if rule == 5:
        return deduct_antisym(th1, th2), (th1, th2)
    if rule == 6:
        return mk_comb_rule(th1, th2), (th1, th2)
    if rule == 7:
        return abs_rule(rnd.choice(INT_VARS + [p, q]), th1), (th1,)
    if rule == 8:
        return beta(random_redex(rnd)), ()
    if rule == 9:
        v = rnd.choice(sorted(frees(th1.concl), key=lambda u: u.name) or [x])
        return inst({v: random_term(rnd, v.ty)}, th1), (th1,)
    if rule == 10:
        return inst_type({TyVar("A"): rnd.choice([INTEGER, BOOL])}, th1), (th1,)
    if rule == 11:
        hyp = rnd.choice(list(th1.hyps) + [random_term(rnd, BOOL)])
        return disch(hyp, th1), (th1,)
    if rule == 12:
        parts = dest_forall(th1.concl)
        ty = parts[0].ty if parts is not None else INTEGER
        return spec(random_term(rnd, ty), th1), (th1,)
    if rule == 13:
        return mp(th1, th2), (th1, th2)
    return gen(rnd.choice(INT_VARS + [p, q]), th1), (th1,)


ORACLE_REGISTRY = Registry()
ORACLE_ONE = ORACLE_REGISTRY.new_oracle("oracle-one")
ORACLE_TWO = ORACLE_REGISTRY.new_oracle("oracle-two")
TAGS = frozenset({"oracle-one", "oracle-two"})


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_random_derivations_stay_well_typed(rnd):
    pool = [
        refl(x),
        assume(p),
        ORACLE_ONE(mk_eq(x, y)),
        ORACLE_TWO(mk_imp(p, q)),
        gen(a, refl(a)),
    ]
    for _ in range(100):
        try:
            th, premises = apply_random_rule(rnd, pool)
        except KernelError:
            continue
        assert th.concl.ty == BOOL
        assert is_well_typed(th.concl)
        assert all(h.ty == BOOL and is_well_typed(h) for h in th.hyps)
        inherited = frozenset().union(*(prem.axioms for prem in premises))
        assert th.axioms <= inherited
        assert th.axioms <= TAGS
        pool.append(th)


def rename_bound(t, names):
    """t with every binder renamed to the next name from names."""
    if isinstance(t, Abs):
        fresh = Var(next(names), t.bvar.ty)
        return Abs(fresh, rename_bound(vsubst({t.bvar: fresh}, t.body), names))
    if isinstance(t, App):
        return App(rename_bound(t.fn, names), rename_bound(t.arg, names))
    return t


def fresh_names(prefix):
    return (f"{prefix}{i}" for i in range(10**6))


@settings(max_examples=1000, deadline=None)
@given(st.randoms(use_true_random=False))
def test_alpha_equivalence_and_substitution_respect_renaming(rnd):
    t = random_term(rnd, BOOL, 4)
    t1 = rename_bound(t, fresh_names("b"))
    t2 = rename_bound(t1, fresh_names("c"))
    assert alpha_eq(t, t)
    assert alpha_eq(t, t1) and alpha_eq(t1, t)
    assert alpha_eq(t1, t2) and alpha_eq(t, t2)
    assert frees(t) == frees(t1)
    other = random_term(rnd, BOOL, 4)
    assert alpha_eq(t, other) == alpha_eq(other, t)
    theta = {x: random_term(rnd, INTEGER, 2)}
    assert alpha_eq(vsubst(theta, t), vsubst(theta, t1))

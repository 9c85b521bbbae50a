"""
CStar - Separation-logic theory tests

Every trusted axiom is checked against the concrete heap evaluator: heaps of
up to three cells over addresses 0..7, bytes 0..3, lists of length up to 3.
"""

import pytest

from cstar.errors import KernelError, SemanticsError
from cstar.kernel.registry import Registry
from cstar.kernel.terms import Var, alpha_eq, dest_entail, dest_imp, mk_int
from cstar.kernel.types import INTEGER
from cstar.quote import parse_bool, parse_hprop, parse_term
from cstar.seplogic import Bounds, array_lemma, entails_semantically, eval_bool, eval_hprop
from cstar.seplogic.evaluator import DEFAULT_BOUNDS, validate_axiom
from cstar.seplogic.theory import register_theory

SMALL = Bounds(max_cells=2, addresses=(0, 1, 2), byte_values=(0, 1), ints=(-1, 0, 1, 2))

TO = Var("to", INTEGER)
I = Var("i", INTEGER)
LEN = Var("len", INTEGER)


def _registered_axioms():
    reg = Registry()
    register_theory(reg)
    return sorted(reg.axioms)


AXIOMS = _registered_axioms()


def test_oracle_bounds():
    assert DEFAULT_BOUNDS.max_cells == 3
    assert DEFAULT_BOUNDS.addresses == tuple(range(8))
    assert DEFAULT_BOUNDS.byte_values == tuple(range(4))
    assert DEFAULT_BOUNDS.max_list_len == 3


def test_every_registered_axiom_is_checked():
    assert len(AXIOMS) >= 35
    for tag in ("hsep-cancel-right", "hexists-sep", "fact-keep", "malloc-at-nonnull", "array_at_snoc"):
        assert tag in AXIOMS


@pytest.mark.parametrize("tag", AXIOMS)
def test_axiom_holds_in_bounded_models(registry, tag):
    assert validate_axiom(registry, tag, DEFAULT_BOUNDS)


def test_select_first_instance_matches_the_loop_lemma(registry, env):
    scope = env.with_variables([TO, I, LEN])
    th = array_lemma(
        registry,
        "undef_array_at_select_first",
        [
            _int_term(scope, "to + i * sizeof(Tchar)"),
            registry.mk_const("Tchar"),
            _int_term(scope, "len - i"),
        ],
    )
    expected = parse_bool(
        "len - i > &0 ==> "
        "(undef_array_at(to + i * sizeof(Tchar), Tchar, len - i) |-- "
        "undef_data_at(to + i * sizeof(Tchar), Tchar) ** "
        "undef_array_at(to + i * sizeof(Tchar) + sizeof(Tchar), Tchar, len - i - &1))",
        scope,
    )
    assert alpha_eq(th.concl, expected)
    assert th.axioms == frozenset({"undef_array_at_select_first"})


def _int_term(scope, text):
    return parse_term(text, scope, INTEGER)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("addr", range(0, 8, 3))
def test_select_first_is_semantically_valid(registry, n, addr):
    th = array_lemma(
        registry, "undef_array_at_select_first", [mk_int(addr), registry.mk_const("Tchar"), mk_int(n)]
    )
    _, consequent = dest_imp(th.concl)
    lhs, rhs = dest_entail(consequent)
    assert entails_semantically(lhs, rhs, registry)


def test_unknown_lemma_and_arity(registry):
    with pytest.raises(KernelError):
        array_lemma(registry, "no_such_lemma", [])
    with pytest.raises(KernelError):
        array_lemma(registry, "array_at_nil", [mk_int(0)])


def test_nil_lemma_entails_emp(registry, env):
    th = array_lemma(registry, "undef_array_at_nil", [mk_int(4), registry.mk_const("Tint")])
    assert alpha_eq(th.concl, parse_bool("undef_array_at(&4, Tint, &0) -|- emp", env))


def test_eval_hprop_on_concrete_heaps(registry, env):
    cell = parse_hprop("data_at(&2, Tchar, &1)", env)
    assert eval_hprop(cell, {2: 1}, registry)
    assert not eval_hprop(cell, {2: 0}, registry)
    assert not eval_hprop(cell, {2: 1, 3: 0}, registry)
    assert eval_hprop(parse_hprop("emp", env), {}, registry)
    both = parse_hprop("data_at(&0, Tchar, &1) ** undef_data_at(&1, Tchar)", env)
    assert eval_hprop(both, {0: 1, 1: 3}, registry)
    assert not eval_hprop(both, {0: 1}, registry)


def test_eval_hprop_rejects_open_terms(registry, env):
    p = Var("p", INTEGER)
    with pytest.raises(SemanticsError):
        eval_hprop(parse_hprop("undef_data_at(p, Tchar)", env.with_variables([p])), {}, registry)


def test_entailment_counter_direction(registry, env):
    p = Var("p", INTEGER)
    scope = env.with_variables([p])
    defined = parse_hprop("data_at(p, Tchar, &1)", scope)
    undefined = parse_hprop("undef_data_at(p, Tchar)", scope)
    assert entails_semantically(defined, undefined, registry, SMALL)
    assert not entails_semantically(undefined, defined, registry, SMALL)


def test_eval_bool_uses_c_division(registry, env):
    assert eval_bool(parse_bool("-7 / 2 = -3", env), registry)
    assert eval_bool(parse_bool("-7 % 2 = -1", env), registry)

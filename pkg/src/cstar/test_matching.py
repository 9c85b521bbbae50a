"""
CStar - Matching, symbolic heap and trivial entailment tests
"""

import pytest

from cstar.kernel.terms import Var, alpha_eq
from cstar.kernel.types import INT_LIST, INTEGER
from cstar.quote import parse_hprop, parse_term
from cstar.seplogic.arith import configure_oracle
from cstar.seplogic.matching import instantiate, match_term
from cstar.symexec.entail import match_conjuncts, trivially_entails
from cstar.symexec.symheap import canonicalize

P = Var("p", INTEGER)
Q = Var("q", INTEGER)
I = Var("i", INTEGER)
X = Var("x", INTEGER)
Y = Var("y", INTEGER)
L = Var("l", INT_LIST)


@pytest.fixture
def scope(env):
    return env.with_variables([P, Q, I, X, Y, L])


@pytest.fixture
def oracle(registry):
    return configure_oracle(registry)


def test_holes_are_instantiated(scope):
    pattern = parse_hprop("data_at(p, Tint, x)", scope)
    target = parse_hprop("data_at(q + 4, Tint, y + 1)", scope)
    found = match_term(pattern, target, holes=[P, X])
    assert found is not None
    theta, _ = found
    assert alpha_eq(theta[X], parse_term("y + 1", scope, INTEGER))
    assert alpha_eq(instantiate(pattern, found), target)


def test_non_holes_must_agree(scope):
    pattern = parse_hprop("data_at(p, Tint, x)", scope)
    target = parse_hprop("data_at(q, Tint, y)", scope)
    assert match_term(pattern, target, holes=[X]) is None


def test_hole_bound_twice_must_agree(scope):
    pattern = parse_hprop("data_at(p, Tint, p)", scope)
    assert match_term(pattern, parse_hprop("data_at(q, Tint, y)", scope), holes=[P]) is None
    assert match_term(pattern, parse_hprop("data_at(q, Tint, q)", scope), holes=[P]) is not None


def test_arithmetic_matching_uses_normal_forms(scope):
    pattern = parse_hprop("undef_data_at(p + i * sizeof(Tchar) + sizeof(Tchar), Tchar)", scope)
    target = parse_hprop("undef_data_at(p + (i + 1) * sizeof(Tchar), Tchar)", scope)
    assert match_term(pattern, target) is None
    assert match_term(pattern, target, arith=True) is not None


def test_conjuncts_match_in_any_order(scope):
    patterns = [parse_hprop(s, scope) for s in ("data_at(p, Tint, x)", "data_at(q, Tint, y)")]
    targets = [parse_hprop(s, scope) for s in ("data_at(q, Tint, 2)", "data_at(p, Tint, 1)")]
    results = list(match_conjuncts(patterns, targets, [X, Y]))
    assert len(results) == 1
    (theta, _), chosen = results[0]
    assert chosen == [1, 0]
    assert alpha_eq(theta[X], parse_term("1", scope, INTEGER))


def test_exact_matching_needs_every_target(scope):
    patterns = [parse_hprop("data_at(p, Tint, x)", scope)]
    targets = [parse_hprop(s, scope) for s in ("data_at(p, Tint, 1)", "data_at(q, Tint, 2)")]
    assert list(match_conjuncts(patterns, targets, [X])) == []
    assert len(list(match_conjuncts(patterns, targets, [X], exact=False))) == 1


def test_canonicalize_extrudes_binders_and_facts(scope):
    heap = canonicalize(
        parse_hprop("data_at(p, Tint, x) ** emp ** (exists v. fact(v > 0) ** data_at(q, Tint, v))", scope)
    )
    assert [v.name for v in heap.binders] == ["v"]
    assert len(heap.pures) == 1
    assert len(heap.spatials) == 2
    assert heap.is_canonical()


def test_canonicalize_renames_clashing_binders(scope):
    heap = canonicalize(parse_hprop("exists x. data_at(p, Tint, x) ** data_at(q, Tint, y)", scope), avoid=["x"])
    assert heap.binders[0].name != "x"


def test_trivial_entailment_by_reordering(scope, oracle):
    lhs = canonicalize(parse_hprop("data_at(p, Tint, x) ** data_at(q, Tint, y)", scope))
    assert trivially_entails(oracle, lhs, parse_hprop("data_at(q, Tint, y) ** data_at(p, Tint, x)", scope))
    assert not trivially_entails(oracle, lhs, parse_hprop("data_at(q, Tint, x) ** data_at(p, Tint, y)", scope))


def test_trivial_entailment_discharges_facts(scope, oracle):
    lhs = canonicalize(parse_hprop("fact(x > 2) ** data_at(p, Tint, x)", scope))
    assert trivially_entails(oracle, lhs, parse_hprop("fact(x > 0) ** data_at(p, Tint, x)", scope))
    assert not trivially_entails(oracle, lhs, parse_hprop("fact(x > 5) ** data_at(p, Tint, x)", scope))


def test_trivial_entailment_instantiates_existentials(scope, oracle):
    lhs = canonicalize(parse_hprop("data_at(p, Tint, x + 1)", scope))
    assert trivially_entails(oracle, lhs, parse_hprop("exists v. fact(v > x) ** data_at(p, Tint, v)", scope))


def test_contradictory_facts_entail_anything(scope, oracle):
    lhs = canonicalize(parse_hprop("fact(x < 0) ** fact(x > 0)", scope))
    assert trivially_entails(oracle, lhs, parse_hprop("data_at(p, Tint, y)", scope))

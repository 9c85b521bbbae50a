"""
CStar - Separation-logic proof library tests

Derived rules are checked twice: syntactically against the expected
conclusion, and semantically, by evaluating the conclusion over small
concrete heaps.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cstar.errors import RuleError
from cstar.kernel import thm as rules
from cstar.kernel.registry import Registry
from cstar.kernel.terms import Var, alpha_eq, dest_binop, dest_entail, flatten_sep
from cstar.kernel.types import CTYPE, INTEGER
from cstar.proofrt.conv import rewrite, rewrite_rule_list
from cstar.proofrt.seprules import SepLib
from cstar.quote import SyntaxEnv, parse_bool, parse_hprop, parse_term
from cstar.seplogic import Bounds, entails_semantically
from cstar.seplogic.arith import configure_oracle
from cstar.seplogic.theory import register_theory
from cstar.symexec.symheap import canonicalize

REGISTRY = Registry()
register_theory(REGISTRY)
LIB = SepLib(REGISTRY, configure_oracle(REGISTRY))
ENV = SyntaxEnv(REGISTRY).with_variables([Var("x", INTEGER), Var("p", INTEGER)])

SMALL = Bounds(max_cells=5, addresses=tuple(range(5)), byte_values=(0, 1), ints=(0, 1))


def h(source):
    return parse_hprop(source, ENV)


def cell(addr, value):
    return f"data_at(&{addr}, Tchar, &{value})"


def heap(cells):
    return h(" ** ".join(cell(a, v) for a, v in cells))


def holds(th):
    """The bi-entailment or entailment concluded by th is valid in SMALL."""
    assert th.hyps == ()
    parts = dest_binop("-|-", th.concl)
    if parts is not None:
        left, right = parts
        return entails_semantically(left, right, REGISTRY, SMALL) and entails_semantically(
            right, left, REGISTRY, SMALL
        )
    left, right = dest_entail(th.concl)
    return entails_semantically(left, right, REGISTRY, SMALL)


@st.composite
def cells(draw, min_size=1):
    n = draw(st.integers(min_value=min_size, max_value=5))
    addrs = draw(st.permutations(range(5)))[:n]
    values = draw(st.lists(st.sampled_from([0, 1]), min_size=n, max_size=n))
    return list(zip(addrs, values))


# -- commutation --------------------------------------------------------------


def test_hsep_comm_is_generalized():
    a, b = h(cell(0, 1)), h(cell(1, 0))
    th = rules.spec(b, LIB.hsep_comm(a))
    assert alpha_eq(th.concl, parse_bool(f"{cell(0, 1)} ** {cell(1, 0)} -|- {cell(1, 0)} ** {cell(0, 1)}", ENV))


def test_hsep_move_brings_the_middle_conjunct_forward():
    a, t, b = h(cell(0, 0)), h(cell(1, 1)), h(cell(2, 0))
    th = rules.spec(b, rules.spec(a, LIB.hsep_move(t)))
    expected = f"{cell(0, 0)} ** {cell(1, 1)} ** {cell(2, 0)} -|- {cell(1, 1)} ** {cell(0, 0)} ** {cell(2, 0)}"
    assert alpha_eq(th.concl, parse_bool(expected, ENV))
    assert holds(th)


# -- lifting, normalization, reordering ---------------------------------------


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_sep_lift_is_sound(data):
    heap_cells = data.draw(cells())
    picks = data.draw(st.permutations(range(len(heap_cells))))
    wanted = [heap_cells[i] for i in picks[: data.draw(st.integers(1, min(2, len(heap_cells))))]]
    t, target = heap(heap_cells), heap(wanted)
    th = LIB.sep_lift(target, t)
    left, right = dest_binop("-|-", th.concl)
    assert alpha_eq(left, t)
    for atom, lifted in zip(flatten_sep(target), flatten_sep(right)):
        assert alpha_eq(atom, lifted)
    assert holds(th)


def test_sep_lift_reports_a_missing_conjunct():
    with pytest.raises(RuleError) as info:
        LIB.sep_lift(h(cell(2, 0)), heap([(0, 0), (1, 1)]))
    assert "is not a conjunct" in info.value.message


def test_sep_normalize_reaches_the_symbolic_heap_form():
    t = h(
        f"{cell(0, 1)} ** (emp ** (exists v. fact(v < 2) ** data_at(&1, Tchar, v)))"
        " ** (pure(0 <= 1) && data_at(&2, Tchar, &0))"
    )
    th = LIB.sep_normalize(t)
    left, right = dest_binop("-|-", th.concl)
    assert alpha_eq(left, t)
    assert alpha_eq(right, canonicalize(t).to_term())
    assert holds(th)


_SHAPES = st.recursive(
    st.one_of(
        st.tuples(st.just("cell"), st.integers(0, 4), st.integers(0, 1)),
        st.just(("emp",)),
        st.tuples(st.just("fact"), st.integers(0, 1)),
    ),
    lambda children: st.one_of(
        st.tuples(st.just("sep"), children, children),
        st.tuples(st.just("exists"), st.integers(0, 4), st.booleans(), children),
    ),
    max_leaves=6,
)


def render(shape, names=None):
    """Source text of an hprop shape; existential binders get fresh names."""
    names = names if names is not None else iter(f"v{i}" for i in range(100))
    kind = shape[0]
    if kind == "cell":
        return cell(shape[1], shape[2])
    if kind == "emp":
        return "emp"
    if kind == "fact":
        return f"fact({shape[1]} <= 1)"
    if kind == "sep":
        return f"({render(shape[1], names)} ** {render(shape[2], names)})"
    _, addr, bounded, body = shape
    v = next(names)
    bound = f"fact({v} <= 1) ** " if bounded else ""
    return f"(exists {v}. {bound}data_at(&{addr}, Tchar, {v}) ** {render(body, names)})"


@settings(max_examples=100, deadline=None)
@given(_SHAPES)
def test_sep_normalize_is_sound(shape):
    t = h(render(shape))
    th = LIB.sep_normalize(t)
    left, right = dest_binop("-|-", th.concl)
    assert alpha_eq(left, t)
    assert alpha_eq(right, canonicalize(t).to_term())
    assert holds(th)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_sep_reorder_is_sound(data):
    heap_cells = data.draw(cells())
    shuffled = data.draw(st.permutations(heap_cells))
    t1, t2 = heap(heap_cells), heap(shuffled)
    th = LIB.sep_reorder(t1, t2)
    assert th is not None
    left, right = dest_binop("-|-", th.concl)
    assert alpha_eq(left, t1)
    assert alpha_eq(right, t2)
    assert holds(th)


def test_sep_reorder_under_existentials():
    t1 = h(f"exists v. data_at(&0, Tchar, v) ** {cell(1, 0)}")
    t2 = h(f"exists w. {cell(1, 0)} ** data_at(&0, Tchar, w)")
    th = LIB.sep_reorder(t1, t2)
    assert th is not None
    assert holds(th)


def test_sep_reorder_of_different_heaps_is_none():
    assert LIB.sep_reorder(heap([(0, 0), (1, 1)]), heap([(0, 0), (1, 0)])) is None
    assert LIB.sep_reorder(heap([(0, 0)]), heap([(0, 0), (1, 0)])) is None


# -- local application --------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_local_apply_is_sound(data):
    heap_cells = data.draw(cells())
    k = data.draw(st.integers(0, len(heap_cells) - 1))
    addr, value = heap_cells[k]
    transform = LIB.ax(
        "data-at-undef",
        parse_term(f"&{addr}", ENV, INTEGER),
        parse_term("Tchar", ENV, CTYPE),
        parse_term(f"&{value}", ENV, INTEGER),
    )
    fact = "fact(0 <= 1)"
    state = h(f"{fact} ** " + " ** ".join(cell(a, v) for a, v in heap_cells))
    th = LIB.local_apply(state, transform)
    left, right = dest_entail(th.concl)
    assert alpha_eq(left, state)
    replaced = [cell(a, v) if i != k else f"undef_data_at(&{a}, Tchar)" for i, (a, v) in enumerate(heap_cells)]
    assert alpha_eq(right, h(" ** ".join([fact] + replaced)))
    assert holds(th)


def test_local_apply_matches_quantified_transforms():
    state = h(f"{cell(0, 1)} ** undef_data_at(&1, Tchar)")
    th = LIB.local_apply(state, REGISTRY.axiom("data-at-undef"))
    _, right = dest_entail(th.concl)
    assert alpha_eq(right, h("undef_data_at(&0, Tchar) ** undef_data_at(&1, Tchar)"))
    assert holds(th)


def test_local_apply_discharges_premises_from_facts():
    state = h("fact(p != 0) ** malloc_at(p, 2)")
    th = LIB.local_apply(state, REGISTRY.axiom("malloc-at-nonnull"))
    left, right = dest_entail(th.concl)
    assert alpha_eq(left, state)
    assert alpha_eq(right, h("fact(p != 0) ** undef_array_at(p, Tchar, 2)"))
    assert holds(th)


def test_local_apply_without_the_premise_fails():
    with pytest.raises(RuleError) as info:
        LIB.local_apply(h("malloc_at(p, 2)"), REGISTRY.axiom("malloc-at-nonnull"))
    assert "cannot discharge" in info.value.message


def test_local_apply_needs_a_matching_part():
    with pytest.raises(RuleError):
        LIB.local_apply(h("undef_data_at(&0, Tchar)"), REGISTRY.axiom("data-at-undef"))


# -- entailment solving -------------------------------------------------------


def test_sep_solve_finds_witnesses_and_facts():
    lhs = h("fact(0 < x) ** data_at(&0, Tchar, x)")
    target = h("exists v. fact(0 <= v) ** data_at(&0, Tchar, v)")
    th = LIB.sep_solve(lhs, target)
    left, right = dest_entail(th.concl)
    assert alpha_eq(left, lhs)
    assert alpha_eq(right, target)
    assert holds(th)


def test_sep_solve_fails_on_missing_cells():
    with pytest.raises(RuleError):
        LIB.sep_solve(heap([(0, 1)]), heap([(1, 0)]))


# -- rewriting ----------------------------------------------------------------


def test_rewrite_is_leftmost_outermost():
    t = h(f"emp ** emp ** {cell(0, 1)}")
    left, right = dest_binop("-|-", rewrite(REGISTRY.axiom("hsep-emp-left"), t).concl)
    assert alpha_eq(left, t)
    assert alpha_eq(right, h(f"emp ** {cell(0, 1)}"))


def test_rewrite_without_a_match_is_reflexivity():
    t = h(cell(0, 1))
    left, right = dest_binop("-|-", rewrite(REGISTRY.axiom("hsep-emp-left"), t).concl)
    assert alpha_eq(left, t)
    assert alpha_eq(right, t)


def test_rewrite_rule_list_reaches_a_fixpoint():
    messy = h(f"emp ** {cell(0, 1)} ** emp")
    eqs = [REGISTRY.axiom("hsep-emp-left"), REGISTRY.axiom("hsep-emp-right")]
    th = rewrite_rule_list(eqs, LIB.entail_refl(messy))
    assert alpha_eq(th.concl, parse_bool(f"{cell(0, 1)} |-- {cell(0, 1)}", ENV))


def test_rewrite_rule_list_stops_on_loops():
    with pytest.raises(RuleError) as info:
        rewrite_rule_list([REGISTRY.axiom("hsep-comm")], LIB.entail_refl(heap([(0, 0), (1, 1)])))
    assert "does not terminate" in info.value.message


def test_rewrite_rule_list_rejects_non_equations():
    with pytest.raises(RuleError):
        rewrite_rule_list([REGISTRY.axiom("fact-drop")], LIB.entail_refl(h("emp")))

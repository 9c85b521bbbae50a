"""
CStar - Quotation tests
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cstar.cfront import Preprocessor, assemble_operational_program, parse_program
from cstar.errors import QuoteError
from cstar.kernel.registry import Registry
from cstar.kernel.terms import (
    BIENTAIL,
    SEP,
    Var,
    alpha_eq,
    dest_binop,
    dest_entail,
    dest_forall,
    dest_hexists,
    flatten_sep,
    frees,
    head_name,
    mk_addr,
    mk_int,
    strip_app,
)
from cstar.kernel.types import BOOL, HPROP, INT_LIST, INTEGER, fun_ty, list_ty
from cstar.proofrt.runtime import ProofRuntime
from cstar.quote import SyntaxEnv, parse_bool, parse_hprop, parse_term, parse_type, print_term
from cstar.seplogic.arith import configure_oracle
from cstar.seplogic.theory import register_theory

P = Var("p", INTEGER)
X = Var("x", INTEGER)
Y = Var("y", INTEGER)
L = Var("l", INT_LIST)


@pytest.fixture
def scope(env):
    return env.with_variables([P, X, Y, L])


def test_separating_conjunction(scope):
    term = parse_hprop("data_at(p, Tint, x) ** emp", scope)
    assert term.ty == HPROP
    parts = flatten_sep(term)
    assert head_name(parts[0]) == "data_at"
    assert dest_binop("**", term) is not None


def test_hprop_equality_is_bientailment(scope):
    term = parse_bool("data_at(p, Tint, x) == data_at(p, Tint, x) ** emp", scope)
    assert dest_binop(BIENTAIL.name, term) is not None


def test_entailment_and_addresses(scope):
    term = parse_bool('data_at(&"a", Tptr, p) |-- emp', scope)
    left, _ = dest_entail(term)
    assert mk_addr("a") in _args(left)


def _args(t):
    return strip_app(t)[1]


def test_numerals_and_arithmetic(scope):
    term = parse_bool("x + &1 <= 2 * y", scope)
    assert term.ty == BOOL
    assert mk_int(1) in _args(_args(term)[0])


def test_antiquotation_splices_terms(scope):
    spliced = scope.with_antiquotes({"v": mk_int(7)})
    term = parse_hprop("data_at(p, Tint, ${v})", spliced)
    assert alpha_eq(term, parse_hprop("data_at(p, Tint, 7)", scope))


def test_antiquotation_type_annotation_is_checked(scope):
    spliced = scope.with_antiquotes({"v": mk_int(7)})
    with pytest.raises(QuoteError):
        parse_hprop("data_at(p, Tint, ${v:bool})", spliced)


def test_unbound_identifier(scope):
    with pytest.raises(QuoteError):
        parse_hprop("data_at(q, Tint, x)", scope)


def test_type_mismatch(scope):
    with pytest.raises(QuoteError):
        parse_hprop("x + 1", scope)
    with pytest.raises(QuoteError):
        parse_bool("emp", scope)


def test_binders_default_to_integer(scope):
    v, _ = dest_forall(parse_bool("forall z. T", scope))
    assert v.ty == INTEGER
    term = parse_bool("forall (z:integer). z + 0 = z", scope)
    assert term.ty == BOOL


def test_existential_over_hprop(scope):
    term = parse_hprop("exists v. data_at(p, Tint, v)", scope)
    assert head_name(term) == "hexists"


def test_lists(scope):
    term = parse_hprop("array_at(p, Tint, [1; 2; x])", scope)
    assert _args(term)[2].ty == INT_LIST
    nil = parse_term("nil", scope, INT_LIST)
    assert nil.ty == INT_LIST


def test_parse_type():
    assert parse_type("integer -> hprop") == fun_ty(INTEGER, HPROP)
    assert parse_type("list integer") == list_ty(INTEGER)
    with pytest.raises(QuoteError):
        parse_type("widget")


@pytest.mark.parametrize(
    "source",
    [
        "data_at(p, Tint, x) ** data_at(p + 4, Tint, y)",
        'data_at(&"a", Tptr, p) ** emp',
        "exists v. data_at(p, Tint, v) ** fact(v = x)",
        "array_at(p, Tint, cons(x, l))",
        "fact(x < y && ~(x = 0))",
        "undef_array_at(p, Tint, x - y)",
    ],
)
def test_print_then_parse_is_alpha_equal(scope, source):
    term = parse_hprop(source, scope)
    assert alpha_eq(parse_hprop(print_term(term), scope), term)


def _arith(draw_leaf):
    return st.recursive(
        draw_leaf,
        lambda children: st.tuples(st.sampled_from(["+", "-", "*"]), children, children).map(
            lambda t: f"({t[1]} {t[0]} {t[2]})"
        ),
        max_leaves=8,
    )


_LEAVES = st.one_of(st.integers(min_value=0, max_value=50).map(str), st.sampled_from(["x", "y"]))

_SCOPE_REGISTRY = Registry()
register_theory(_SCOPE_REGISTRY)
_SCOPE = SyntaxEnv(_SCOPE_REGISTRY).with_variables([X, Y])


@settings(max_examples=500, deadline=None)
@given(_arith(_LEAVES))
def test_printer_round_trips_arithmetic(source):
    term = parse_term(source, _SCOPE, INTEGER)
    assert alpha_eq(parse_term(print_term(term), _SCOPE, INTEGER), term)


CORPUS = [
    "swap",
    "clear",
    "forall",
    "globals",
    "malloc_free",
    "multi_branch",
    "mutually_recursive",
    "no_return",
    "address_of_local",
    "clear_declarative",
    "reverse",
]


def _corpus_terms(path):
    """Contracts and verification conditions the engine builds for one program."""
    registry = Registry()
    register_theory(registry)
    expanded = Preprocessor().expand_file(str(path))
    program = assemble_operational_program(parse_program(expanded.text, str(path), expanded))
    runtime = ProofRuntime(registry, program, configure_oracle(registry))
    report = runtime.run()
    terms = []
    for func in program.program.functions:
        spec = runtime.engine.signature(func)
        terms.extend([spec.require, spec.ensure])
    terms.extend(vc.goal for vc in report.vcs)
    return registry, terms


@pytest.mark.parametrize("name", CORPUS)
def test_printer_round_trips_benchmark_terms(benchmarks, name):
    registry, terms = _corpus_terms(benchmarks / f"{name}.cst")
    assert terms
    for term in terms:
        scope = SyntaxEnv(registry).with_variables(sorted(frees(term), key=lambda v: v.name))
        reparsed = parse_term(print_term(term), scope, term.ty)
        assert alpha_eq(reparsed, term), print_term(term)


def test_separating_conjunction_is_right_associative(scope):
    term = parse_hprop("emp ** emp ** emp", scope)
    _, right = dest_binop(SEP.name, term)
    assert dest_binop(SEP.name, right) is not None


ATTACH_INVARIANT = """
exists buddy_v bi inv_l inv_dl inv_hl i order_v pg_v.
  data_at(&"max_order", Tuchar, &max_order) **
  data_at(&"order", Tuchar, &order_v) **
  data_at(&"pg", Tptr, pg_v) **
  data_at(&"buddy", Tptr, buddy_v) **
  data_at(&"pool", Tptr, pool_pre) **
  data_at(&"__hyp_vmemmap", Tptr, vmemmap) **
  (dlist_head_repr pool_pre 0 max_order inv_hl) **
  (free_area_repr
    (is_free_1st inv_l) start end inv_l) **
  (free_area_head_repr
    (is_free_1st inv_l) start end inv_dl) **
  (store_pageinfo_array vmemmap start end inv_l) **
  (store_zero_array
    (i2vaddr i) 0 (PAGE_SIZE * (2 EXP order_v))
    (PAGE_SIZE * (2 EXP order_v))) **
  ${other_facts_and_representation_predicates:hprop}
"""

ATTACH_STUBS = {
    "PAGE_SIZE": "integer",
    "i2vaddr": "integer -> integer",
    "is_free_1st": "list integer -> integer",
    "dlist_head_repr": "integer -> integer -> integer -> list integer -> hprop",
    "free_area_repr": "integer -> integer -> integer -> list integer -> hprop",
    "free_area_head_repr": "integer -> integer -> integer -> list integer -> hprop",
    "store_pageinfo_array": "integer -> integer -> integer -> list integer -> hprop",
    "store_zero_array": "integer -> integer -> integer -> integer -> hprop",
}


def test_page_allocator_invariant_type_checks(registry, env):
    for name, ty in ATTACH_STUBS.items():
        registry.new_constant(name, parse_type(ty, registry))
    ghosts = [Var(n, INTEGER) for n in ("max_order", "pool_pre", "vmemmap", "start", "end")]
    scope = env.with_variables(ghosts).with_antiquotes(
        {"other_facts_and_representation_predicates": parse_hprop("emp", env)}
    )
    term = parse_hprop(ATTACH_INVARIANT, scope)
    assert term.ty == HPROP
    binders = []
    while dest_hexists(term) is not None:
        v, term = dest_hexists(term)
        binders.append(v)
    assert [v.name for v in binders][:3] == ["buddy_v", "bi", "inv_l"]
    types = {v.name: v.ty for v in binders}
    assert types["inv_l"] == INT_LIST
    assert types["inv_hl"] == INT_LIST
    assert types["bi"] == INTEGER
    assert len(flatten_sep(term)) == 12

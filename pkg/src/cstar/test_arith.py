"""
CStar - Arithmetic oracle tests
"""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cstar.errors import ArithError
from cstar.kernel.registry import Registry
from cstar.kernel.terms import Var, alpha_eq
from cstar.kernel.types import INTEGER
from cstar.quote import SyntaxEnv, parse_bool, parse_term
from cstar.seplogic import arith_equal, arith_rule, normal_form
from cstar.seplogic.arith import ARITH_TAG, configure_oracle
from cstar.seplogic.theory import register_theory

NAMES = ("x", "y", "z")
VARS = [Var(n, INTEGER) for n in NAMES]
LOOP_VARS = [Var(n, INTEGER) for n in ("len", "i", "to")]


@pytest.fixture
def scope(env):
    return env.with_variables(VARS + LOOP_VARS)


@pytest.mark.parametrize(
    "fact",
    [
        "len - i > 0 <=> i < len",
        "len - i - 1 == len - (i + 1)",
        "(to + i * sizeof(Tchar)) + sizeof(Tchar) == to + (i + 1) * sizeof(Tchar)",
    ],
)
def test_loop_facts_are_proved(registry, scope, fact):
    formula = parse_bool(fact, scope)
    th = arith_rule(registry, formula)
    assert alpha_eq(th.concl, formula)
    assert th.axioms == frozenset({ARITH_TAG})
    assert th.hyps == ()


def test_invalid_formula_has_a_countermodel(registry, scope):
    with pytest.raises(ArithError) as info:
        arith_rule(registry, parse_bool("0 == 1", scope))
    assert "not valid" in info.value.message
    with pytest.raises(ArithError) as info:
        arith_rule(registry, parse_bool("x < y", scope))
    assert info.value.countermodel


@pytest.mark.parametrize(
    "nonlinear", ["x * y == y * x", "x * x >= 0", "x / y == x / y + 0", "x EXP 2 >= 0", "2 EXP x > 0"]
)
def test_nonlinear_input_is_rejected(registry, scope, nonlinear):
    with pytest.raises(ArithError) as info:
        arith_rule(registry, parse_bool(nonlinear, scope))
    assert "linear" in info.value.message


@pytest.mark.parametrize("fact", ["2 EXP 3 == 8", "x EXP 1 == x", "x EXP 0 == 1", "4096 * (2 EXP 2) == 16384"])
def test_constant_exponents_are_arithmetic(registry, scope, fact):
    formula = parse_bool(fact, scope)
    assert alpha_eq(arith_rule(registry, formula).concl, formula)


def test_normal_form_folds_sizeof(scope):
    left = parse_term("to + i * sizeof(Tint) + sizeof(Tint)", scope, INTEGER)
    right = parse_term("4 * (i + 1) + to", scope, INTEGER)
    assert arith_equal(left, right)
    assert normal_form(left) == normal_form(right)
    assert not arith_equal(left, parse_term("to + i", scope, INTEGER))


def test_verdicts_are_cached(tmp_path, scope):
    reg = Registry()
    register_theory(reg)
    formula = parse_bool("x + 1 > x", scope)
    oracle = configure_oracle(reg, cache_enabled=True, cache_dir=str(tmp_path / "cache"))
    try:
        oracle.prove(formula)
        oracle.prove(formula)
        assert oracle.queries == 1
    finally:
        oracle.close()


# Formulas are guarded by the evaluation range, so validity over the
# integers coincides with truth at every point of the range.

RANGE = range(-8, 9)

_OPS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}

_atoms = st.tuples(
    st.lists(st.integers(min_value=-3, max_value=3), min_size=3, max_size=3),
    st.sampled_from(sorted(_OPS)),
    st.integers(min_value=-12, max_value=12),
)


def _atom_text(atom):
    coeffs, op, bound = atom
    lhs = " + ".join(f"({c}) * {n}" for c, n in zip(coeffs, NAMES))
    return f"({lhs} {op} ({bound}))"


def _atom_value(atom, point):
    coeffs, op, bound = atom
    return _OPS[op](sum(c * v for c, v in zip(coeffs, point)), bound)


_GUARD = " && ".join(f"-8 <= {n} && {n} <= 8" for n in NAMES)

_REGISTRY = Registry()
register_theory(_REGISTRY)
_SCOPE = SyntaxEnv(_REGISTRY).with_variables(VARS)
_ORACLE = configure_oracle(_REGISTRY)


@settings(max_examples=300, deadline=None)
@given(st.lists(_atoms, min_size=1, max_size=2), st.sampled_from(["&&", "||"]))
def test_oracle_agrees_with_exhaustive_evaluation(atoms, connective):
    body = f" {connective} ".join(_atom_text(a) for a in atoms)
    formula = parse_bool(f"{_GUARD} ==> ({body})", _SCOPE)
    combine = all if connective == "&&" else any
    expected = all(
        combine(_atom_value(a, point) for a in atoms)
        for point in itertools.product(RANGE, repeat=len(NAMES))
    )
    assert _ORACLE.is_valid(formula) == expected

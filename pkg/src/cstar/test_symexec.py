"""
CStar - Symbolic execution tests

Programs are run without proof blocks, so these exercise the engine's own
rules: loads and stores, calls, loops, joins and automatic discharge.
"""

import pytest

from cstar.cfront import Preprocessor, assemble_operational_program, parse_program
from cstar.errors import QuoteError, SymExecError
from cstar.kernel.registry import Registry
from cstar.kernel.terms import strip_forall
from cstar.proofrt.runtime import ProofRuntime
from cstar.seplogic.arith import configure_oracle
from cstar.seplogic.theory import register_theory


def run(source, name="test.cst"):
    registry = Registry()
    register_theory(registry)
    oracle = configure_oracle(registry)
    expanded = Preprocessor().expand(source, name)
    program = assemble_operational_program(parse_program(expanded.text, name, expanded))
    runtime = ProofRuntime(registry, program, oracle)
    return runtime.run()


SWAP = """
[[parameter(`va:integer`)]]
[[parameter(`vb:integer`)]]
[[require(`data_at(a, Tint, va) ** data_at(b, Tint, vb)`)]]
[[ensure(`data_at(a, Tint, vb) ** data_at(b, Tint, va)`)]]
void swap(int *a, int *b)
{
    int t = *a;
    *a = *b;
    *b = t;
}
"""


def test_swap_closes_without_obligations():
    report = run(SWAP)
    assert report.vcs == []
    assert report.success
    (func,) = report.functions
    assert func.name == "swap"
    assert func.proof_blocks == 0
    assert func.auto_discharged == 1


def test_wrong_postcondition_becomes_a_vc():
    report = run(SWAP.replace("data_at(b, Tint, va)`)]]", "data_at(b, Tint, vb)`)]]"))
    assert [vc.id for vc in report.vcs] == ["vc1"]
    vc = report.vcs[0]
    assert vc.kind == "postcondition"
    assert vc.function == "swap"
    bound, _ = strip_forall(vc.goal)
    assert [v.name for v in bound][:2] == ["a", "b"]
    assert not report.success


def test_store_without_ownership_is_an_error():
    source = """
    [[require(`emp`)]]
    [[ensure(`emp`)]]
    void poke(int *p)
    {
        *p = 1;
    }
    """
    with pytest.raises(SymExecError) as info:
        run(source)
    assert "no ownership" in info.value.message
    assert info.value.line == 6
    assert info.value.exit_code == 2


def test_reading_undefined_memory_is_an_error():
    source = """
    [[require(`undef_data_at(p, Tint)`)]]
    [[ensure(`undef_data_at(p, Tint)`)]]
    int peek(int *p)
    {
        return *p;
    }
    """
    with pytest.raises(SymExecError) as info:
        run(source)
    assert "undefined" in info.value.message


def test_counting_loop_with_invariant():
    source = """
    [[require(`fact(n >= 0)`)]]
    [[ensure(`fact(__result == n)`)]]
    int count(int n)
    {
        int i = 0;
        while (i < n)
            [[invariant(`exists k. fact(0 <= k && k <= n) **
                data_at(&"i", Tint, k) ** data_at(&"n", Tint, n)`)]]
        {
            i = i + 1;
        }
        return i;
    }
    """
    report = run(source)
    assert report.vcs == []
    assert report.functions[0].auto_discharged == 3


def test_weak_invariant_leaves_restore_obligation():
    source = """
    [[require(`fact(n >= 0)`)]]
    [[ensure(`emp`)]]
    void spin(int n)
    {
        int i = 0;
        while (i < n)
            [[invariant(`exists k. fact(k == 0) **
                data_at(&"i", Tint, k) ** data_at(&"n", Tint, n)`)]]
        {
            i = i + 1;
        }
    }
    """
    report = run(source)
    assert [vc.kind for vc in report.vcs] == ["invariant-restore"]


def test_branches_must_be_joined_before_a_loop():
    source = """
    [[require(`emp`)]]
    [[ensure(`emp`)]]
    void f(int x)
    {
        int y = 0;
        if (x > 0) { y = 1; } else { y = 2; }
        while (y > 5)
            [[invariant(`exists v. data_at(&"x", Tint, x) ** data_at(&"y", Tint, v)`)]]
        {
            y = y - 1;
        }
    }
    """
    with pytest.raises(SymExecError) as info:
        run(source)
    assert "join" in info.value.message


def test_assertion_joins_branches():
    source = """
    [[require(`emp`)]]
    [[ensure(`emp`)]]
    void f(int x)
    {
        int y = 0;
        if (x > 0) { y = 1; } else { y = 2; }
        [[assert(`exists v. fact(1 <= v && v <= 2) **
            data_at(&"x", Tint, x) ** data_at(&"y", Tint, v)`)]];
    }
    """
    report = run(source)
    assert report.vcs == []


def test_calls_consume_the_precondition():
    source = SWAP + """
    [[require(`data_at(p, Tint, 1) ** data_at(q, Tint, 2)`)]]
    [[ensure(`data_at(p, Tint, 2) ** data_at(q, Tint, 1)`)]]
    void twice(int *p, int *q)
    {
        swap(p, q);
    }
    """
    report = run(source)
    assert report.vcs == []
    assert [f.name for f in report.functions] == ["swap", "twice"]


def test_call_without_resources_leaves_a_precondition_vc():
    source = SWAP + """
    [[require(`data_at(p, Tint, 1)`)]]
    [[ensure(`data_at(p, Tint, 1)`)]]
    void broken(int *p, int *q)
    {
        swap(p, q);
    }
    """
    report = run(source)
    assert "call-precondition" in [vc.kind for vc in report.vcs]


def test_globals_are_framed_implicitly():
    source = """
    int counter;

    void reset(void)
    {
        counter = 0;
    }
    """
    report = run(source)
    assert report.success


def test_non_void_function_must_return():
    source = """
    int f(void)
    {
        int x = 1;
    }
    """
    with pytest.raises(SymExecError):
        run(source)


def test_ill_typed_contract_is_a_quotation_error():
    source = """
    [[require(`x + 1`)]]
    void f(int x)
    {
    }
    """
    with pytest.raises(QuoteError):
        run(source)


def test_states_are_recorded_per_program_point():
    report = run(SWAP)
    assert report.states
    first = report.states[0]
    assert first["function"] == "swap"
    assert "data_at" in first["state"]
    assert sorted(first) == ["file", "function", "line", "state"]


def test_empty_program():
    report = run("")
    assert report.functions == []
    assert report.success

"""
CStar - Proof runtime tests

Covers the proof-code interpreter, the builtins it is wired to, proof blocks
running against the symbolic engine, and residual proof checking.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cstar.cfront import Preprocessor, assemble_operational_program, ast, parse_program
from cstar.errors import ParseError, ProofRuntimeError, StaleStateError, VerificationFailure
from cstar.kernel.registry import Registry
from cstar.kernel.terms import alpha_eq, dest_binop
from cstar.kernel.thm import Theorem
from cstar.kernel.types import INTEGER
from cstar.proofrt.builtins import ProofBuiltins
from cstar.proofrt.interpreter import Interpreter, ProofFunction
from cstar.proofrt.residual import ResidualChecker, emit_residual
from cstar.proofrt.runtime import ProofRuntime
from cstar.quote import SyntaxEnv, parse_bool, parse_hprop, parse_term
from cstar.seplogic.arith import ARITH_TAG, configure_oracle
from cstar.seplogic.theory import register_theory
from cstar.symexec.vc import VerificationCondition


@pytest.fixture
def builtins(registry):
    return ProofBuiltins(registry, configure_oracle(registry))


@pytest.fixture
def interpreter(registry, builtins):
    return Interpreter(registry, builtins.table())


def run(interpreter, text, global_block=True):
    block = ast.ProofBlock(text, "proof.cst", 1)
    interpreter.run_block(block, interpreter.file_scope, global_block)
    return interpreter.file_scope


def load_prelude(interpreter):
    expanded = Preprocessor().expand("", "empty.cst")
    program = parse_program(expanded.text, "empty.cst", expanded)
    for block in program.global_proofs:
        interpreter.run_block(block, interpreter.file_scope, global_block=True)


# -- interpreter --------------------------------------------------------------


def test_proof_functions_and_integer_semantics(interpreter):
    scope = run(
        interpreter,
        """
        int fact(int n)
        {
            if (n <= 1)
                return 1;
            return n * fact(n - 1);
        }
        int six = fact(3);
        int q = -7 / 2;
        int r = -7 % 2;
        int total = 0;
        int i = 0;
        while (1) {
            i = i + 1;
            if (i > 4) break;
            total = total + i;
        }
        """,
    )
    assert scope.find("six").value == 6
    assert (scope.find("q").value, scope.find("r").value) == (-3, -1)
    assert scope.find("total").value == 10


def test_runtime_type_error_is_located(interpreter):
    with pytest.raises(ProofRuntimeError) as info:
        run(interpreter, "term t = 1;")
    assert "runtime type error" in info.value.message
    assert info.value.file == "proof.cst"
    assert info.value.line == 1


def test_builtin_arguments_are_checked(interpreter):
    with pytest.raises(ProofRuntimeError) as info:
        run(interpreter, "thm th = refl(1);")
    assert "argument 1 of refl expects term" in info.value.message


def test_functions_only_in_global_blocks(interpreter):
    with pytest.raises(ParseError):
        run(interpreter, "int one(void) { return 1; }", global_block=False)


def test_return_outside_function(interpreter):
    with pytest.raises(ProofRuntimeError) as info:
        run(interpreter, "return 1;")
    assert "outside" in info.value.message


def test_runaway_recursion_is_stopped(interpreter):
    with pytest.raises(ProofRuntimeError) as info:
        run(interpreter, "int loop(int n) { return loop(n + 1); }\nint x = loop(0);")
    assert "recursion too deep" in info.value.message


def test_quotations_splice_term_variables(interpreter, env):
    scope = run(interpreter, "term x = `&5`;\nterm y = `${x} + &1`;")
    assert alpha_eq(scope.find("y").value, parse_term("&5 + &1", env, INTEGER))


def test_kernel_rules_from_proof_code(interpreter):
    scope = run(
        interpreter,
        """
        thm th = refl(`&1 + &2`);
        term c = conclusion(th);
        int same = equals_term(antecedent(c), consequent(c));
        thm a = arith_rule(`&1 + &2 == &3`);
        """,
    )
    th = scope.find("th").value
    assert isinstance(th, Theorem)
    assert th.hyps == ()
    assert scope.find("same").value == 1
    assert scope.find("a").value.axioms == frozenset({ARITH_TAG})


def test_kernel_failures_become_runtime_errors(interpreter):
    with pytest.raises(ProofRuntimeError) as info:
        run(interpreter, "thm bad = trans(refl(`&1`), refl(`&2`));")
    assert info.value.message.startswith("trans:")


# -- prelude ------------------------------------------------------------------

CELLS = {
    "a": 'data_at(&"a", Tint, &1)',
    "b": 'data_at(&"b", Tint, &2)',
    "c": 'undef_data_at(&"c", Tchar)',
    "d": 'data_at(&"d", Tint, &4)',
}


def hprop(env, *names):
    return parse_hprop(" ** ".join(CELLS[n] for n in names), env)


@pytest.mark.parametrize(
    "target, conjuncts",
    [("a", "abc"), ("b", "abc"), ("c", "abc"), ("b", "ab"), ("a", "a"), ("c", "abcd")],
)
def test_prelude_sep_lift_one_agrees_with_builtin(interpreter, builtins, env, target, conjuncts):
    load_prelude(interpreter)
    fn = interpreter.lookup_function("sep_lift_one")
    assert isinstance(fn, ProofFunction)
    goal, term = hprop(env, target), hprop(env, *conjuncts)
    interpreted = interpreter.call(fn, [goal, term])
    native = builtins.sep_lift_one(goal, term)
    assert interpreted.hyps == ()
    assert alpha_eq(interpreted.concl, native.concl)


@pytest.fixture(scope="module")
def prelude():
    registry = Registry()
    register_theory(registry)
    builtins = ProofBuiltins(registry, configure_oracle(registry))
    interpreter = Interpreter(registry, builtins.table())
    load_prelude(interpreter)
    return interpreter, builtins, SyntaxEnv(registry)


@st.composite
def heap_conjuncts(draw):
    names = draw(st.lists(st.sampled_from("abcdefgh"), min_size=2, max_size=6, unique=True))
    atoms = []
    for name in names:
        if draw(st.booleans()):
            atoms.append(f'data_at(&"{name}", Tint, &{draw(st.integers(0, 9))})')
        else:
            atoms.append(f'undef_data_at(&"{name}", {draw(st.sampled_from(["Tint", "Tchar"]))})')
    return atoms, draw(st.sampled_from(atoms))


@settings(max_examples=50, deadline=None)
@given(heap_conjuncts())
def test_prelude_sep_lift_one_agrees_with_builtin_on_random_heaps(prelude, case):
    interpreter, builtins, env = prelude
    atoms, target = case
    fn = interpreter.lookup_function("sep_lift_one")
    goal, term = parse_hprop(target, env), parse_hprop(" ** ".join(atoms), env)
    interpreted = interpreter.call(fn, [goal, term])
    native = builtins.sep_lift_one(goal, term)
    assert interpreted.hyps == ()
    assert alpha_eq(interpreted.concl, native.concl)


def test_prelude_sep_lift_one_returns_null(interpreter, builtins, env):
    load_prelude(interpreter)
    fn = interpreter.lookup_function("sep_lift_one")
    assert interpreter.call(fn, [hprop(env, "d"), hprop(env, "a", "b")]) is None
    assert builtins.sep_lift_one(hprop(env, "d"), hprop(env, "a", "b")) is None


def test_prelude_rewrite_conv_list(interpreter, registry, env):
    load_prelude(interpreter)
    fn = interpreter.lookup_function("rewrite_conv_list")
    messy = parse_hprop(f'emp ** {CELLS["a"]} ** emp ** {CELLS["b"]}', env)
    th = interpreter.call(fn, [[registry.axiom("hsep-emp-left"), None], messy])
    left, right = dest_binop("-|-", th.concl)
    assert alpha_eq(left, messy)
    assert alpha_eq(right, hprop(env, "a", "b"))


# -- proof blocks against the engine ------------------------------------------

LIFT = """
[[require(`data_at(p, Tint, 1) ** data_at(q, Tint, 2)`)]]
[[ensure(`data_at(q, Tint, 2) ** data_at(p, Tint, 1)`)]]
void f(int *p, int *q)
{
    «
    thm th = sep_lift(`data_at(q, Tint, 2)`, get_symbolic_state());
    set_symbolic_state(th);
    »
}
"""


def runtime_for(registry, source, name="test.cst"):
    oracle = configure_oracle(registry)
    expanded = Preprocessor().expand(source, name)
    program = assemble_operational_program(parse_program(expanded.text, name, expanded))
    return ProofRuntime(registry, program, oracle)


def test_proof_block_transforms_the_state(registry):
    runtime = runtime_for(registry, LIFT)
    report = runtime.run()
    (func,) = report.functions
    assert func.proof_blocks == 1
    assert func.segments == 2
    assert report.vcs == []
    assert report.trust.theorems == 1
    assert ARITH_TAG not in report.trust.tags


def test_installing_a_stale_theorem_fails(registry):
    source = LIFT.replace("set_symbolic_state(th);", "set_symbolic_state(th);\n    set_symbolic_state(th);")
    with pytest.raises(StaleStateError) as info:
        runtime_for(registry, source).run()
    assert "stale" in info.value.message
    assert info.value.exit_code == 1


def test_engine_builtins_need_a_function(interpreter):
    with pytest.raises(ProofRuntimeError) as info:
        run(interpreter, "term s = get_symbolic_state();")
    assert "only available" in info.value.message


# -- residual proofs ----------------------------------------------------------


@pytest.fixture
def residual(registry, env):
    runtime = runtime_for(registry, "")
    runtime.run()
    vcs = [
        VerificationCondition("vc1", "assert", parse_bool("&1 + &1 == &2", env), "f", "test.cst", 3),
        VerificationCondition(
            "vc2",
            "postcondition",
            parse_bool(f'{CELLS["a"]} ** {CELLS["b"]} |-- {CELLS["b"]} ** {CELLS["a"]}', env),
            "f",
            "test.cst",
            5,
        ),
    ]
    return ResidualChecker(runtime), vcs


PROOFS = """
«
thm proof1(void)
{
    return arith_rule(vc1);
}

thm proof2(void)
{
    return sep_solve(antecedent(vc2), consequent(vc2));
}
»
"""


def test_residual_proofs_by_name(tmp_path, residual):
    checker, vcs = residual
    path = tmp_path / "proofs.cst"
    path.write_text(PROOFS)
    assert checker.check(str(path), vcs) == {"vc1", "vc2"}
    assert ARITH_TAG in checker.runtime.trust.tags


def test_residual_main_is_run(tmp_path, residual):
    checker, vcs = residual
    path = tmp_path / "proofs.cst"
    path.write_text(PROOFS.replace("»", "void main(void)\n{\n    assert_prove(proof1(), vc1);\n}\n»"))
    assert checker.check(str(path), vcs) == {"vc1"}


def test_residual_mismatch_names_the_vc(tmp_path, residual):
    checker, vcs = residual
    path = tmp_path / "proofs.cst"
    path.write_text(PROOFS.replace("»", "void main(void)\n{\n    assert_prove(proof1(), vc2);\n}\n»"))
    with pytest.raises(VerificationFailure) as info:
        checker.check(str(path), vcs)
    assert info.value.message.startswith("vc2:")


def test_residual_file_rejects_c_functions(tmp_path, residual):
    checker, vcs = residual
    path = tmp_path / "proofs.cst"
    path.write_text("void g(void) { }\n")
    with pytest.raises(ParseError):
        checker.check(str(path), vcs)


def test_emitted_skeleton_lists_every_vc(tmp_path, residual):
    checker, vcs = residual
    skeleton = emit_residual(vcs, "test.cst")
    assert skeleton.startswith("// Residual proof program for test.cst")
    for n in (1, 2):
        assert f"thm proof{n}(void)" in skeleton
        assert f"assert_prove(proof{n}(), vc{n});" in skeleton
    path = tmp_path / "skeleton.cst"
    path.write_text(skeleton)
    with pytest.raises(VerificationFailure) as info:
        checker.check(str(path), vcs)
    assert "no proof" in info.value.message


def test_empty_skeleton():
    assert emit_residual([]) == "// Residual proof program\n"

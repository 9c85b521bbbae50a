"""
CStar - C frontend tests
"""

import pytest

from cstar.cfront import (
    Preprocessor,
    Segment,
    assemble_operational_program,
    parse_program,
    slice_segments,
)
from cstar.cfront import ast
from cstar.cfront.slicing import FuncEntry, FuncExit, flatten, reconstruct
from cstar.errors import ParseError

COUNTDOWN = """
int limit;

int countdown(int n)
    [[parameter(`k:integer`)]]
    [[require(`fact(n == k) ** data_at(&"n", Tint, n)`)]]
    [[ensure(`fact(r == 0)`)]]
{
    « term start = get_symbolic_state(); »
    while (n > 0)
        [[invariant(`exists v. fact(v >= 0) ** data_at(&"n", Tint, v)`)]]
    {
        int step = 1;
        n = n - step;
        « /* nothing to do */ »
    }
    return n;
}
"""


def parse(source, file="test.cst"):
    return parse_program(source, file)


def test_function_attributes():
    program = parse(COUNTDOWN)
    func = program.function("countdown")
    assert func.is_definition
    assert [p.name for p in func.params] == ["n"]
    assert func.ghosts == ("`k:integer`",)
    assert "data_at" in func.require
    assert "r == 0" in func.ensure
    assert [g.name for g in program.globals] == ["limit"]


def test_loops_carry_their_invariant():
    func = parse(COUNTDOWN).function("countdown")
    loops = [s for s in func.body if isinstance(s, ast.While)]
    assert len(loops) == 1
    assert "fact(v >= 0)" in loops[0].invariant


def test_loop_without_invariant_is_rejected():
    with pytest.raises(ParseError) as info:
        parse("void f(int n) { while (n > 0) { n = n - 1; } }")
    assert "invariant" in info.value.message
    assert info.value.exit_code == 3


def test_proof_blocks_are_statements():
    func = parse(COUNTDOWN).function("countdown")
    blocks = [s for s in func.body if isinstance(s, ast.ProofBlock)]
    assert len(blocks) == 1
    assert "get_symbolic_state" in blocks[0].text
    assert blocks[0].line == 9


def test_global_proof_blocks():
    program = parse("« int answer(void) { return 42; } »\nvoid f(void) { }")
    assert len(program.global_proofs) == 1
    assert [f.name for f in program.functions] == ["f"]


def test_default_contract_is_emp():
    func = parse("void f(void) { }").function("f")
    assert func.require == "`emp`"
    assert func.ensure == "`emp`"


def test_prototype_supplies_contract_to_definition():
    program = parse(
        "int g(int x) [[require(`emp`)]] [[ensure(`fact(r == x)`)]];\n"
        "int g(int x) { return x; }\n"
    )
    func = program.function("g")
    assert func.is_definition
    assert "r == x" in func.ensure


def test_syntax_errors_carry_locations():
    with pytest.raises(ParseError) as info:
        parse("void f(void) {\n  int x = ;\n}", file="bad.cst")
    assert info.value.file == "bad.cst"
    assert info.value.line == 2


def test_statement_attribute_on_wrong_statement():
    with pytest.raises(ParseError):
        parse("void f(int n) { [[invariant(`emp`)]] n = 1; }")


def test_flatten_and_reconstruct_are_inverse():
    func = parse(COUNTDOWN).function("countdown")
    assert reconstruct(flatten(func.body)) == func.body


def test_segments_alternate_with_proof_blocks():
    func = parse(COUNTDOWN).function("countdown")
    steps = slice_segments(func)
    kinds = [type(s) for s in steps]
    assert kinds == [Segment, ast.ProofBlock, Segment, ast.ProofBlock, Segment]
    first, last = steps[0], steps[-1]
    assert isinstance(first.events[0], FuncEntry)
    assert isinstance(last.events[-1], FuncExit)
    assert [s.name for s in steps if isinstance(s, Segment)] == ["seg1", "seg2", "seg3"]


def test_segment_entry_context():
    func = parse(COUNTDOWN).function("countdown")
    inside_loop = slice_segments(func)[4]
    assert inside_loop.loop_depth == 1
    assert "step" in inside_loop.variables
    assert "n" in inside_loop.variables


def test_operational_program_render():
    program = parse(COUNTDOWN)
    proof_program = assemble_operational_program(program)
    assert len(proof_program.drivers) == 1
    driver = proof_program.drivers[0]
    assert len(driver.segments) == 3
    assert len(driver.proof_blocks) == 2
    listing = proof_program.render()
    assert "verify_countdown" in listing
    assert "feed_program_segment(seg1);" in listing


def test_includes_are_expanded_once(tmp_path):
    (tmp_path / "defs.h").write_text("int shared;\n")
    main = tmp_path / "main.cst"
    main.write_text('#include "defs.h"\n#include "defs.h"\nvoid f(void) { }\n')
    expanded = Preprocessor(prelude=False).expand_file(str(main))
    assert expanded.text.count("int shared;") == 1
    assert [p.endswith("defs.h") for p in expanded.files] == [True]
    line = expanded.text.split("\n").index("void f(void) { }") + 1
    assert expanded.origin(line) == (str(main), 3)


def test_prelude_is_included_by_default(tmp_path):
    main = tmp_path / "main.cst"
    main.write_text("void f(void) { }\n")
    expanded = Preprocessor().expand_file(str(main))
    assert any(p.endswith("cstarlib.h") for p in expanded.files)
    program = parse_program(expanded.text, str(main), expanded)
    assert program.function("f") is not None
    assert program.global_proofs


def test_include_search_path(tmp_path):
    lib = tmp_path / "lib"
    lib.mkdir()
    (lib / "extra.h").write_text("int extra;\n")
    main = tmp_path / "main.cst"
    main.write_text('#include <extra.h>\n')
    expanded = Preprocessor([str(lib)], prelude=False).expand_file(str(main))
    assert "int extra;" in expanded.text


def test_already_included_files_are_skipped(tmp_path):
    (tmp_path / "defs.h").write_text("int shared;\n")
    main = tmp_path / "proofs.cst"
    main.write_text('#include "defs.h"\n')
    expanded = Preprocessor(prelude=False, already_included=[str(tmp_path / "defs.h")]).expand_file(
        str(main)
    )
    assert "int shared;" not in expanded.text


def test_missing_include_and_bad_directive(tmp_path):
    main = tmp_path / "main.cst"
    main.write_text('#include "missing.h"\n')
    with pytest.raises(ParseError):
        Preprocessor(prelude=False).expand_file(str(main))
    main.write_text("#define X 1\n")
    with pytest.raises(ParseError):
        Preprocessor(prelude=False).expand_file(str(main))

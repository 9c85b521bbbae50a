"""
CStar - Command line tests

`cstar verify` end to end on the benchmark programs, in process.
"""

import json
import re

import pytest

from cstar.cli import main, parse_args
from cstar.utils.constants import ENV_INCLUDE_PATH

pytestmark = pytest.mark.usefixtures("isolated")

STANDALONE = [
    "swap",
    "clear",
    "forall",
    "globals",
    "malloc_free",
    "multi_branch",
    "mutually_recursive",
    "no_return",
    "address_of_local",
]

WITH_PROOFS = [("clear_declarative", "clear_proofs"), ("reverse", "reverse_proofs")]


def verify(*args):
    return main(["verify", *[str(a) for a in args]])


def json_report(capsys):
    return json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("name", STANDALONE)
def test_benchmark_verifies(benchmarks, name):
    assert verify(benchmarks / f"{name}.cst") == 0


@pytest.mark.parametrize("name, proofs", WITH_PROOFS)
def test_benchmark_verifies_with_residual_proofs(benchmarks, capsys, name, proofs):
    code = verify(benchmarks / f"{name}.cst", "--proofs", benchmarks / f"{proofs}.cst", "--json")
    report = json_report(capsys)
    assert code == 0
    assert report["verdict"] == "verified"
    assert report["vcs"]
    assert all(vc["proved"] for vc in report["vcs"])


def test_swap_needs_no_proof_code(benchmarks, capsys):
    assert verify(benchmarks / "swap.cst", "--json") == 0
    report = json_report(capsys)
    (swap,) = report["functions"]
    assert swap["function"] == "swap"
    assert swap["proof_blocks"] == 0
    assert swap["vcs"] == 0
    assert report["vcs"] == []


def test_declarative_clear_leaves_three_vcs(benchmarks, capsys):
    assert verify(benchmarks / "clear_declarative.cst", "--dump-vcs") == 1
    out = capsys.readouterr()
    dump = json.loads(out.out)
    assert [vc["id"] for vc in dump["vcs"]] == ["vc1", "vc2", "vc3"]
    assert [vc["kind"] for vc in dump["vcs"]] == ["invariant-establish", "invariant-restore", "postcondition"]
    assert all(vc["goal"].startswith("forall") for vc in dump["vcs"])
    assert "3 of 3 VCs undischarged" in out.err


def test_emit_residual_skeleton(benchmarks, tmp_path):
    out = tmp_path / "skeleton.cst"
    assert verify(benchmarks / "clear_declarative.cst", "--emit-residual", out) == 1
    skeleton = out.read_text()
    for n in (1, 2, 3):
        assert f"thm proof{n}(void)" in skeleton
        assert f"assert_prove(proof{n}(), vc{n});" in skeleton
    assert "proof4" not in skeleton
    assert verify(benchmarks / "clear_declarative.cst", "--proofs", out) == 1


def test_clear_without_proof_blocks_fails_at_the_store(benchmarks, tmp_path, capsys):
    source = (benchmarks / "clear.cst").read_text()
    stripped = tmp_path / "clear.cst"
    stripped.write_text(re.sub("«.*?»", "", source, flags=re.DOTALL))
    assert verify(stripped, "-I", benchmarks) == 2
    err = capsys.readouterr().err
    assert "no ownership" in err
    assert str(stripped) in err


def test_include_path_from_environment(benchmarks, tmp_path, monkeypatch):
    local = tmp_path / "clear.cst"
    local.write_text((benchmarks / "clear.cst").read_text())
    assert verify(local) == 3
    monkeypatch.setenv(ENV_INCLUDE_PATH, str(benchmarks))
    assert verify(local) == 0


def test_reverse_needs_its_residual_proof(benchmarks, capsys):
    assert verify(benchmarks / "reverse.cst", "--json") == 1
    report = json_report(capsys)
    assert report["verdict"] == "failed"
    assert len(report["vcs"]) >= 1
    assert not any(vc["proved"] for vc in report["vcs"])


def test_empty_file_verifies(tmp_path):
    empty = tmp_path / "empty.cst"
    empty.write_text("")
    assert verify(empty) == 0
    assert verify(empty, "--no-prelude") == 0


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.cst"
    bad.write_text("void f(void) {\n    int x = ;\n}\n")
    assert verify(bad) == 3
    assert f"{bad}:2" in capsys.readouterr().err


def test_wrong_residual_proof_fails(benchmarks, tmp_path, capsys):
    proofs = tmp_path / "proofs.cst"
    proofs.write_text("«\nvoid main(void)\n{\n    assert_prove(NULL, vc1);\n}\n»\n")
    assert verify(benchmarks / "clear_declarative.cst", "--proofs", proofs) == 1
    assert "vc1: no proof" in capsys.readouterr().err


def test_json_report_to_file(benchmarks, tmp_path):
    out = tmp_path / "reports" / "swap.json"
    assert verify(benchmarks / "swap.cst", "--json", out, "--dump-states") == 0
    report = json.loads(out.read_text())
    assert report["verdict"] == "verified"
    assert report["states"]
    assert {s["function"] for s in report["states"]} == {"swap"}


def test_trust_report_lists_used_tags(benchmarks, capsys):
    assert verify(benchmarks / "clear.cst", "--trust-report") == 0
    tags = json_report(capsys)["trust"]["tags"]
    assert "arith-oracle" in tags
    assert "undef_array_at_select_first" in tags


def test_states_are_dumped_on_error(benchmarks, tmp_path, capsys):
    source = (benchmarks / "clear.cst").read_text()
    stripped = tmp_path / "clear.cst"
    stripped.write_text(re.sub("«.*?»", "", source, flags=re.DOTALL))
    assert verify(stripped, "-I", benchmarks, "--dump-states") == 2
    states = json.loads(capsys.readouterr().out)["states"]
    assert states
    assert states[0]["function"] == "clear"


def test_verdict_cache(benchmarks, tmp_path):
    cache = tmp_path / "cache"
    assert verify(benchmarks / "clear.cst", "--cache", "--cache-dir", cache) == 0
    assert cache.is_dir()
    assert verify(benchmarks / "clear.cst", "--cache", "--cache-dir", cache) == 0


def test_parse_args_defaults():
    args = parse_args(["verify", "prog.cst"])
    assert args.file == "prog.cst"
    assert args.proofs is None
    assert args.include == []
    assert args.json is None
    assert not args.no_prelude
    assert parse_args(["verify", "prog.cst", "--json"]).json == "-"

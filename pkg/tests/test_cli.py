import json
import subprocess
import sys
from pathlib import Path

import pytest

from ewtopos import cli

DEMOS = Path(__file__).resolve().parent.parent / "demos"
RT = ["--workspace", str(DEMOS / "roundtrip.ews")]
BOOL = ["--workspace", str(DEMOS / "booleans.ews")]


def fields(argv):
    code, out = cli.run(argv + ["--format", "machine"])
    data = json.loads(out)
    assert data["exit"] == code
    return code, dict((k, v) for k, v in data["fields"])


def test_reduce_example():
    code, text = cli.run(["reduce", "(S K K) S"])
    assert code == 0
    assert "outcome: converged" in text and "term: S\n" in text


def test_reduce_exit_codes():
    assert cli.run(["reduce", "num:0 K"])[0] == 0
    assert cli.run(["--fuel", "100", "reduce", "(\\x. x x) (\\x. x x)"])[0] == 2
    code, f = fields(["reduce", "K S S"])
    assert code == 0 and f["term"] == "S"


def test_reflexivity_check():
    for p in ("Fp", "g", "FGg"):
        assert cli.run(RT + ["check", "extW", p, p, "--witness", "refl"])[0] == 0
    assert cli.run(RT + ["check", "iR", "p", "p", "--witness", "refl"])[0] == 0


def test_round_trip_through_the_cli():
    code, f = fields(RT + ["translate", "F", "p"])
    assert code == 0 and f["result"] == ["(pt, K) -> [{K}]", "(pt, S) -> [{S}]"]
    assert cli.run(RT + ["translate", "G", "Fp"])[0] == 0
    assert cli.run(RT + ["check", "iR", "p", "G(F(p))", "--witness", "gf_unit"])[0] == 0
    assert cli.run(RT + ["check", "iR", "GFp", "p", "--witness", "gf_counit"])[0] == 0
    assert cli.run(RT + ["check", "extW", "FGg", "g", "--witness", "counit"])[0] == 0
    assert cli.run(RT + ["check", "extW", "g", "FGg", "--witness", "unit"])[0] == 0


def test_literal_unit_witness_fails():
    code, text = cli.run(RT + ["check", "extW", "g", "FGg", "--witness", "unit_literal"])
    assert code == 1 and "outside the support" in text


def test_search_and_check_without_witness():
    code, f = fields(RT + ["search", "extW", "g", "FGg"])
    assert code == 0 and f["witness"].startswith("ew(")
    code, f = fields(RT + ["check", "iR", "p", "GFp"])
    assert code == 0 and "found by search" in f["witness"]


def test_operations():
    for op in (["meet", "p", "p"], ["join", "p", "GFp"], ["classify", "p"]):
        assert cli.run(RT + ["op"] + op)[0] == 0


def test_topos_commands():
    assert cli.run(BOOL + ["topos", "validate", "Bool"])[0] == 0
    assert cli.run(BOOL + ["topos", "validate", "swap", "id"])[0] == 0
    code, f = fields(BOOL + ["topos", "compose", "swap", "swap"])
    assert code == 0 and len(f["certificates"]) == 5
    assert cli.run(BOOL + ["topos", "embed", "diagonal"])[0] == 0


def test_laws_worst_wins():
    code, text = cli.run(["laws", "witnesses"])
    assert code == 1 and "fails" in text
    assert cli.run(["laws", "terminal", "--seed", "2"])[0] == 0


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["reduce", "K )"],
    ["--workspace", "no-such-file.ews", "reduce", "K"],
    RT + ["check", "extW", "g", "nope"],
    RT + ["check", "extW", "g", "FGg", "--witness", "nope"],
    RT + ["laws", "nope"],
])
def test_input_errors(argv):
    code, text = cli.run(argv)
    assert code == 3 and "error:" in text


def test_undefined_id_is_named():
    assert "'nope'" in cli.run(RT + ["check", "extW", "g", "nope"])[1]


def test_flags_after_the_subcommand():
    assert cli.run(["reduce", "K", "--format", "machine"])[1].startswith("{")
    assert "suite fg (seed 4)" in cli.run(["--seed", "3", "laws", "fg", "--seed", "4"])[1]


def test_reports_are_byte_identical_across_processes():
    argv = RT + ["search", "iR", "p", "GFp"]
    runs = [subprocess.run([sys.executable, "-m", "ewtopos"] + argv, capture_output=True)
            for _ in range(2)]
    assert runs[0].returncode == runs[1].returncode == 0
    assert runs[0].stdout == runs[1].stdout
    assert runs[0].stdout.decode() == cli.run(argv)[1]

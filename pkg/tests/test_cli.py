import json
import subprocess
import sys
from pathlib import Path

import pytest

from flange import cli
from flange.pdio import grid_from_dict, parse_grid
from flange.resolve import PostconditionError, Report

FIXTURES = Path(__file__).parent / "fixtures"
MALFORMED = sorted((FIXTURES / "malformed").iterdir())
VALID = sorted((FIXTURES / "valid").iterdir())


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("path", MALFORMED, ids=lambda p: p.name)
def test_malformed_inputs_exit_2(capsys, path):
    code, out, err = run(capsys, "hull", "--input", path)
    assert code == cli.EXIT_USAGE
    assert json.loads(out)["error"] in ("ParseError", "DegreeViolation", "SchemaError")
    assert path.name in err


@pytest.mark.parametrize("path", VALID, ids=lambda p: p.name)
@pytest.mark.parametrize("command", ["dual", "hull", "cover", "injres", "flatres", "flange",
                                     "soc", "top", "verify"])
def test_valid_inputs_exit_0(capsys, path, command):
    code, out, _ = run(capsys, command, "--input", path, "--field",
                       3 if "f3" in path.name else 2)
    assert code == cli.EXIT_OK
    report = json.loads(out)
    assert report["input"] == str(path)


def test_hull_report_schema(capsys):
    code, out, _ = run(capsys, "hull", "--input", FIXTURES / "valid" / "k_origin.json")
    report = json.loads(out)
    assert report["summands"] == [{"kind": "injective", "degree": [0], "face": []}]
    assert report["table"] == [{"face": [], "degree": [0], "mult": 1}]
    assert report["verify"]["ok"]


def test_barcode(capsys):
    code, out, _ = run(capsys, "barcode", "--input", FIXTURES / "valid" / "interval.pmod")
    assert code == 0
    assert json.loads(out)["bars"] == [{"left": 0, "right": 3, "mult": 1}]


def test_barcode_needs_one_parameter(capsys):
    code, _, _ = run(capsys, "barcode", "--input", FIXTURES / "valid" / "koszul2.pmod")
    assert code == cli.EXIT_USAGE


def test_infinite_bars_are_strings(capsys, tmp_path):
    src = tmp_path / "free.pmod"
    src.write_text("pmod 1 2\ngens 1\n0\nrels 0\n")
    code, out, _ = run(capsys, "barcode", "--input", src)
    assert json.loads(out)["bars"] == [{"left": 0, "right": "+inf", "mult": 1}]


def test_dual_output_parses(capsys):
    code, out, _ = run(capsys, "dual", "--input", FIXTURES / "valid" / "interval.pmod", "--box-pad", 0)
    M = grid_from_dict(json.loads(out)["module"])
    assert M.box.low == (-3,) and M.box.high == (1,)


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "hull")[0] == cli.EXIT_USAGE
    assert run(capsys, "hull", "--input", tmp_path / "missing.json")[0] == cli.EXIT_USAGE
    assert run(capsys, "hull", "--input", FIXTURES / "valid" / "interval.pmod", "--field", 3)[0] == 2
    assert run(capsys, "hull", "--input", FIXTURES / "valid" / "interval.pmod", "--box-pad", -1)[0] == 2
    with pytest.raises(SystemExit) as info:
        cli.main(["frobnicate"])
    assert info.value.code == cli.EXIT_USAGE


def test_verification_failure_exits_1(capsys, monkeypatch):
    failing = Report("injective hull", {"mono": False})
    monkeypatch.setattr(cli, "verify_injective_hull", lambda phi: failing)
    code, out, _ = run(capsys, "hull", "--input", FIXTURES / "valid" / "k_origin.json")
    assert code == cli.EXIT_VERIFY
    assert not json.loads(out)["verify"]["ok"]


def test_postcondition_failure_exits_3(capsys, monkeypatch):
    def broken(M):
        raise PostconditionError("boom")

    monkeypatch.setattr(cli, "flange_presentation", broken)
    code, _, err = run(capsys, "flange", "--input", FIXTURES / "valid" / "k_origin.json")
    assert code == cli.EXIT_INTERNAL
    assert "boom" in err


def test_batch_keeps_input_order_and_worst_code(capsys):
    paths = [FIXTURES / "valid" / "interval.pmod", FIXTURES / "malformed" / "empty.txt",
             FIXTURES / "valid" / "k_origin.json"]
    args = ["soc"] + [x for p in paths for x in ("--input", p)]
    code, out, _ = run(capsys, *args, "--jobs", 2)
    reports = json.loads(out)
    assert [r["input"] for r in reports] == [str(p) for p in paths]
    assert code == cli.EXIT_USAGE


def test_gen_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for dest in (a, b):
        assert run(capsys, "gen", "--seed", 5, "--n", 2, "--kind", "random-flange", "--output", dest)[0] == 0
    assert a.read_text() == b.read_text()
    assert parse_grid(a.read_text()).n == 2


def test_gen_rejects_bad_params(capsys):
    assert run(capsys, "gen", "--width", 1)[0] == cli.EXIT_USAGE


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "flange.cli", "top", "--input",
                           str(FIXTURES / "valid" / "koszul2.pmod")], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["table"] == [{"face": [], "degree": [0, 0], "mult": 1}]

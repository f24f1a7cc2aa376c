"""Command-line interface: exit codes, JSON reports, strictness flags."""

import json

import pytest

from selflink.cli import main

SCN = """\
group free x y
knot k = x y
trace h : k -> k latitude x y points ( + x ) ( - y )
phi P knot k toroidal h
query decide "+1*[x]" "0" P
"""

UNKNOWN_SCN = """\
group free x y
knot k = x^2 y
trace lat : k -> k latitude x^2 y
sphere sigma unlink k
phi P knot k toroidal lat spheres sigma
query decide "+1*[x y x^-1]" "0" P
"""


@pytest.fixture
def scn_file(tmp_path):
    p = tmp_path / "case.scn"
    p.write_text(SCN)
    return str(p)


@pytest.fixture
def unknown_file(tmp_path):
    p = tmp_path / "unknown.scn"
    p.write_text(UNKNOWN_SCN)
    return str(p)


def test_normalize_command(scn_file, capsys):
    assert main(["normalize", scn_file, "x", "y", "y^-1"]) == 0
    assert capsys.readouterr().out.strip().endswith("x")


def test_canon_command(scn_file, capsys):
    assert main(["canon", scn_file, "k", "y"]) == 0
    out = capsys.readouterr().out
    assert "[x]" in out


def test_mu_command(scn_file, capsys):
    assert main(["mu", scn_file, "h"]) == 0
    assert capsys.readouterr().out.strip().endswith("0")


def test_run_command(scn_file, capsys):
    assert main(["run", scn_file]) == 0
    # [x] differs from 0 under pure conjugation; the separator certifies it
    assert "distinct" in capsys.readouterr().out


def test_decide_command(scn_file, capsys):
    assert main(["decide", scn_file, "+1*[x]", "+1*[x]", "P"]) == 0
    assert "equal" in capsys.readouterr().out


def test_json_report_schema(scn_file, capsys):
    assert main(["--json", "run", scn_file]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["schema"] == 1
    assert rep["command"] == "run"
    assert set(rep["bounds"]) == {"depth", "translate_len", "support_len",
                                 "max_states"}
    assert isinstance(rep["results"], list) and rep["results"]
    assert rep["results"][0]["verdict"] in {"equal", "distinct", "unknown"}
    assert "wall_ms" in rep["timing"]


def test_json_byte_stable_modulo_timing(scn_file, capsys):
    main(["--json", "run", scn_file])
    a = json.loads(capsys.readouterr().out)
    main(["--json", "run", scn_file])
    b = json.loads(capsys.readouterr().out)
    a.pop("timing")
    b.pop("timing")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_strict_exit_code_on_unknown(unknown_file):
    small = ["--depth", "2", "--translate-len", "2", "--support-len", "8"]
    assert main(small + ["run", unknown_file]) == 0
    assert main(["--strict"] + small + ["run", unknown_file]) == 2


def test_strict_sign_rejects_lenient_input(scn_file):
    assert main(["decide", scn_file, "2*[x]", "0", "P"]) == 0
    assert main(["--strict-sign", "decide", scn_file, "2*[x]", "0", "P"]) == 1
    assert main(["--strict-sign", "decide", scn_file, "+2*[x]", "0", "P"]) == 0


def test_missing_file_is_an_error(capsys):
    assert main(["run", "/nonexistent/file.scn"]) == 1


def test_parse_error_is_an_error(tmp_path):
    p = tmp_path / "bad.scn"
    p.write_text("group free x y\nknot k = q\n")
    assert main(["run", str(p)]) == 1


def test_bounds_flags_are_threaded(scn_file, capsys):
    assert main(["--json", "--depth", "3", "--translate-len", "2",
                 "decide", scn_file, "+1*[x]", "0", "P"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["bounds"]["depth"] == 3
    assert rep["bounds"]["translate_len"] == 2

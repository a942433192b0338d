import json

import pytest

from adjcert.cli import main


def test_verify_json(capsys):
    assert main(["verify", "--scenario", "a1", "--p", "5", "--m", "2", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["verdict"] is True
    assert data["scenario"] == {"kind": "a1", "p": 5, "m": 2, "precision": 32, "unit": 2}


def test_verify_text(capsys):
    assert main(["verify", "--scenario", "prelim", "--p", "7"]) == 0
    assert "verdict: PASS" in capsys.readouterr().out


def test_symbol3(capsys):
    assert main(["symbol3", "--p", "5", "t", "p", "u"]) == 0
    assert capsys.readouterr().out.strip() == "nonzero"
    assert main(["symbol3", "--p", "5", "u", "p", "-1"]) == 0
    assert capsys.readouterr().out.strip() == "zero"


@pytest.mark.parametrize("a,b,expected", [("2", "3", "+1"), ("5", "2", "-1"), ("p", "u", "-1"), ("p", "-1", "+1")])
def test_hilbert(capsys, a, b, expected):
    assert main(["hilbert", "--p", "5", a, b]) == 0
    assert capsys.readouterr().out.strip() == expected


@pytest.mark.parametrize("argv", [
    ["verify", "--scenario", "a1", "--p", "4"],
    ["verify", "--scenario", "a1", "--p", "2"],
    ["verify", "--scenario", "zz", "--p", "5"],
    ["verify", "--scenario", "a1", "--p", "5", "--unit", "4"],
    ["verify", "--scenario", "a1", "--p", "5", "--m", "0"],
    ["hilbert", "--p", "9", "2", "3"],
    ["symbol3", "--p", "5", "t", "q", "u"],
    [],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_out_file(tmp_path, capsys):
    out = tmp_path / "cert.json"
    assert main(["verify", "--scenario", "dd", "--p", "5", "--format", "json", "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert out.read_text() == printed

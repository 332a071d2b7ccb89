import json

import pytest

from hodgecorr import __version__
from hodgecorr.cli import COMMANDS, parse_complex, parse_word, run


@pytest.mark.parametrize(
    "text, expected",
    [("2", 2), ("i", 1j), ("-i", -1j), ("-1+0.5i", -1 + 0.5j), ("3j", 3j), (" 1 - 2i ", 1 - 2j), ("1e-3", 0.001), (".5", 0.5)],
)
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected


@pytest.mark.parametrize("text", ["", "q", "1+", "1..2", "ii", "z"])
def test_parse_complex_rejects(text):
    with pytest.raises(ValueError):
        parse_complex(text)


def test_parse_word_binds_z():
    assert parse_word("0, 1, z", 2j) == [0, 1, 2j]
    with pytest.raises(ValueError):
        parse_word(" , ", None)


def report(capsys, argv):
    code = run(argv)
    return code, json.loads(capsys.readouterr().out)


def test_enumerate_writes_out(tmp_path, capsys):
    out = tmp_path / "g.json"
    code, rep = report(capsys, ["enumerate", "--s", "3", "--genus", "0", "--loops", "1", "--max-edges", "6", "--out", str(out)])
    assert code == 0 and rep["ok"]
    assert json.loads(out.read_text()) == rep
    assert rep["version"] == __version__ and rep["command"] == "enumerate"


def test_check_qme_example(capsys):
    code, rep = report(capsys, ["check-qme", "--s", "2", "--genus", "0", "--max-edges", "4"])
    assert code == 0 and all(rep["checks"].values())


def test_correlator_example(capsys):
    code, rep = report(capsys, ["correlator", "--word", "0,1,z", "--z", "i", "--tol", "1e-3"])
    assert code == 0
    assert rep["result"]["pi_power"] == 2
    assert rep["result"]["value_im"] == pytest.approx(-0.915965594177219, rel=1e-6)


def test_failed_check_exits_one(capsys):
    code, rep = report(capsys, ["correlator", "--word", "0,1,z", "--z", "i", "--tol", "1e-20"])
    assert code == 1 and not rep["ok"]


def test_bad_word_exits_two(capsys):
    assert run(["correlator", "--word", "0,1,q"]) == 2
    assert "usage" in capsys.readouterr().err


def test_unknown_flag_exits_two(capsys):
    with pytest.raises(SystemExit) as e:
        run(["kz-check", "--bogus"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        run(["frobnicate"])
    assert e.value.code == 2


@pytest.mark.parametrize("argv", [["kz-check"], ["green-elliptic"], ["check-bv", "--seed", "4"], ["one-loop", "--word", "0,1,i", "--samples", "20000", "--u", "0.3"]])
def test_reports_are_byte_identical(argv, capsys):
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    assert capsys.readouterr().out == first


def test_config_hash_tracks_flags(capsys):
    _, a = report(capsys, ["kz-check", "--seed", "1"])
    _, b = report(capsys, ["kz-check", "--seed", "2"])
    _, c = report(capsys, ["kz-check", "--seed", "1", "--timings"])
    assert a["config_hash"] != b["config_hash"]
    assert a["config_hash"] == c["config_hash"] and "seconds" in c and "seconds" not in a


def test_every_command_is_wired():
    assert len(COMMANDS) == 9

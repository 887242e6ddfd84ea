import csv
import io
import json
import subprocess
import sys

import pytest

from potgame.cli import EXIT_INFEASIBLE, EXIT_INPUT, EXIT_OK, run
from potgame.game import parse_game
from potgame.tsb import check_pbe, parse_equilibrium

from conftest import GAMES_DIR, separating

SEP = str(GAMES_DIR / "separating.json")
MATCH = str(GAMES_DIR / "matching.json")
INVERTED = str(GAMES_DIR / "separating_inverted.json")


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_enumerate_json():
    code, out, _ = call("enumerate", SEP)
    assert code == EXIT_OK
    assert [t["x"] for t in json.loads(out)] == ["1", "1/2", "1/3"]


def test_enumerate_csv():
    code, out, _ = call("enumerate", SEP, "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["a_a1", "a_a2", "lambda_w1", "lambda_w2", "x", "y"]
    assert rows[3] == ["1/3", "2/3", "1", "0", "1/3", "1"]


def test_solve_op():
    code, out, _ = call("solve-op", SEP)
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["sender_value"] == "3/4"
    assert doc["recommendations"] == ["a1", "a2"]


def test_solve_cs_round_trips_into_check(tmp_path):
    code, out, _ = call("solve-cs", SEP)
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["tsb_max"]["value"] == "3/4"
    assert doc["tsb_min"]["value"] == "5/12"
    assert doc["tsb_max"]["check"]["all_ok"]
    path = tmp_path / "eq.json"
    path.write_text(json.dumps(doc["tsb_max"]))
    code, out, _ = call("check", SEP, str(path))
    assert code == EXIT_OK and json.loads(out)["all_ok"]
    pi, a, lam = parse_equilibrium(path.read_bytes())
    assert check_pbe(separating(), pi, a, lam).ok


def test_check_inverted():
    code, out, _ = call("check", SEP, INVERTED)
    doc = json.loads(out)
    assert code == EXIT_OK
    assert not doc["all_ok"] and not doc["receiver_br"]
    n, played, better, gain = doc["receiver_witness"]
    assert isinstance(n, int) and gain != "0"


def test_pot_json_and_table():
    code, out, _ = call("pot", MATCH)
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["ratios"]["tsb_max"] == "1"
    assert doc["competitive"] == ["1", "0", "1", "2"]
    code, out, _ = call("pot", SEP, "--format", "table")
    assert any(line.split() == ["PoT(babbling_pref)", "1/3", "(≈", "0.333333)"] for line in out.splitlines())


def test_infeasible_exit_code(tmp_path):
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"prior": ["1/4", "3/4"], "sender_payoff": [["2", "0"], ["0", "2"]], "receiver_payoff": [["0", "2"], ["2", "0"]]}))
    code, out, _ = call("solve-cs", str(g))
    assert code == EXIT_INFEASIBLE
    doc = json.loads(out)
    assert doc["tsb_max"] is None and doc["babbling"]["sender_value"] == "1/2"
    assert call("pot", str(g))[0] == EXIT_INFEASIBLE


@pytest.mark.parametrize("argv", [
    ("enumerate", "/nonexistent.json"),
    ("solve-op", SEP, "--format", "csv"),
    ("quadratic", "--b", "-1"),
    ("quadratic", "--b", "0.1", "--n", "3"),
    ("quadratic-sweep", "--grid", "0.2,0.24"),
    ("quadratic-sweep", "--grid", "x,y,z"),
    ("bogus",),
])
def test_input_errors(argv):
    code, out, err = call(*argv)
    assert code == EXIT_INPUT
    if argv[0] != "bogus":
        assert "error" in json.loads(err)


def test_bad_game_document(tmp_path):
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"prior": ["0.5", "0.5"], "sender_payoff": [["1"]], "receiver_payoff": [["1"]]}))
    code, _, err = call("solve-op", str(g))
    assert code == EXIT_INPUT and json.loads(err)["error"] == "ParseError"


def test_quadratic():
    code, out, _ = call("quadratic", "--b", "0.1")
    doc = json.loads(out)
    assert doc["N"] == 2 and abs(doc["ucs"] + 0.0408333333) < 1e-9
    code, out, _ = call("quadratic", "--b", "0.1", "--format", "csv")
    assert out.splitlines()[0] == "b,N,ucs,uop,ratio_abs"


def test_quadratic_sweep_csv():
    code, out, _ = call("quadratic-sweep", "--grid", "1e-2,1e-3,1e-4", "--format", "csv", "--simulate", "--trials", "2000", "--seed", "1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK
    assert [r["N"] for r in rows] == ["71", "22", "7"]
    assert set(rows[0]) == {"b", "N", "ucs", "uop", "ratio_abs", "sim_sender_mean", "sim_sender_se"}


@pytest.mark.parametrize("argv", [
    ("solve-cs", SEP),
    ("pot", SEP, "--format", "table"),
    ("quadratic-sweep", "--grid", "1e-1,1e-2,1e-3", "--simulate", "--trials", "5000", "--seed", "9"),
])
def test_byte_identical(argv):
    assert call(*argv) == call(*argv)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "potgame", "solve-op", SEP, "--format", "table"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "U^OP" in proc.stdout and "3/4" in proc.stdout


def test_version():
    assert call("--version")[0] == EXIT_OK


def test_games_dir_documents_parse():
    for path in (SEP, MATCH):
        with open(path, "rb") as fh:
            parse_game(fh.read())

import io
import json
import subprocess
import sys

import pytest

from posetmu.cli import run
from posetmu.engine import mobius_recursive
from posetmu.perm import parse_permutation as P

HEADLINE = "9 7 10 4 8 1 2 6 5 3 19 17 20 14 18 11 12 16 15 13"


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def call_json(*argv):
    code, text = call(*argv)
    assert code == 0
    return json.loads(text)


def test_mu_formula_matches_recursive():
    data = call_json("mu", "132", "413265", "--method", "formula")
    assert data["mu"] == mobius_recursive(P("132"), P("413265"))
    assert data["method"] == "formula"
    assert set(data) == {"sigma", "pi", "mu", "ne", "ne_term", "second_term", "method", "elapsed_ms"}


def test_mu_headline():
    data = call_json("mu", "54123", HEADLINE, "--method", "formula")
    assert (data["mu"], data["ne"], data["second_term"]) == (-3, 0, -3)
    assert data["pi"] == HEADLINE


def test_ne_and_ezsum():
    data = call_json("ne", "132", "2314765")
    assert data["ne"] == 1 and data["normal"] == ["0300065"]
    data = call_json("ezsum", "132", "413265", "--list")
    assert data["representatives"] == ["400065", "013200", "010065", "000265"]
    assert data["ez_sum"] == 0
    assert sorted(len(s) for s in data["sets"]) == [2, 3, 3, 4]


def test_interval_and_aposet_dot(tmp_path):
    dot = tmp_path / "interval.dot"
    data = call_json("interval", "123", "4567123", "--dot", str(dot))
    assert data["size"] == 10
    text = dot.read_text()
    assert text.startswith("digraph") and "4567123" in text
    dot = tmp_path / "a.dot"
    data = call_json("aposet", "132", "413265", "--dot", str(dot))
    assert data["size"] == 10 and len(data["minimal"]) == 6 and len(data["maximal"]) == 4
    assert "(1,∅,1,21)" in dot.read_text()


def test_survey_csv(tmp_path):
    path = tmp_path / "out.csv"
    code, text = call("survey", "--max-len", "5", "--csv", str(path))
    assert code == 0
    assert text.startswith("summary rows=") and "second_term_zero=" in text and "single=" in text
    first = path.read_bytes()
    call("survey", "--max-len", "5", "--csv", str(path), "--jobs", "2")
    assert path.read_bytes() == first
    assert first.decode().splitlines()[0] == "sigma,pi,mu,ne,second_term,single,elapsed_ms"


def test_survey_random_is_reproducible():
    a = call("survey", "--random", "4", "--sigma-len", "3", "--pi-len", "8", "--seed", "7")
    b = call("survey", "--random", "4", "--sigma-len", "3", "--pi-len", "8", "--seed", "7")
    assert a == b and a[0] == 0
    assert len(a[1].splitlines()) == 5


def test_bench_and_verify():
    data = call_json("bench", "132", "413265")
    assert data["agree"] is True and data["formula"]["mu"] == data["recursive"]["mu"]
    data = call_json("verify", "--max-len", "4")
    assert data["failures"] == 0 and data["checked"] > 0


def test_poset_utilities(tmp_path):
    path = tmp_path / "p.txt"
    path.write_text("a < b < d\na < c < d\n")
    assert call_json("poset", "mobius", str(path))["mobius"] == 1
    assert call_json("poset", "mobius", str(path), "--bottom", "a", "--top", "b")["mobius"] == -1
    assert call_json("poset", "euler", str(path))["reduced_euler"] == 0
    code, text = call("poset", "dot", str(path))
    assert code == 0 and text.count("->") == 4
    data = call_json("poset", "boolean", "-n", "4", "-k", "2", "--mode", "ge")
    assert data["mobius"] == data["closed_form"] == -3 and data["size"] == 12
    assert call_json("poset", "boolean", "-n", "3")["mobius"] == -1


def test_exit_codes(capsys):
    assert call("mu", "1x2", "12")[0] == 1
    assert call("bogus")[0] == 1
    assert call("survey")[0] == 1
    assert call("poset", "mobius")[0] == 1
    assert call("interval", "12", "321")[0] == 1
    assert call("interval", "1", "2413", "--cap", "2")[0] == 2
    err = capsys.readouterr().err
    assert "cap exceeded" in err


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "posetmu.cli", "mu", "1", "12"], capture_output=True, text=True
    )
    assert out.returncode == 0 and json.loads(out.stdout)["mu"] == -1

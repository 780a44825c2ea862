import io
import json
import subprocess
import sys

import pytest

from jetbracket.cli import FIXTURES, ParseError, main, parse, pretty

CR = """\
system cr
base x y
unknown u v
eq E1 = u[1,0] - v[0,1]
eq E2 = u[0,1] + v[1,0]
"""


def call(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def sysfile(tmp_path):
    def write(text):
        p = tmp_path / "s.sys"
        p.write_text(text)
        return str(p)
    return write


@pytest.mark.parametrize("text, kind, line, col", [
    ("system s\nbase x y\nunknown u\neq F = u[1]\n", "arity", 4, 8),
    ("system s\nbase x y\nunknown u\neq F = w[1,0]\n", "unknown-identifier", 4, 8),
    ("system s\nbase x y\nunknown u\neq F = u[1,0] $ 2\n", "lexical", 4, 15),
    ("system s\nbase x y\nunknown u\neq F = u[1,0] +\n", "syntax", 4, 16),
    ("system s\nbase x y\nunknown u\neq F order 1 = u[2,0]\n", "order", 4, 4),
    ("system s\nbase x y\nunknown u\neq F = x[1,0]\n", "arity", 4, 9),
])
def test_parse_errors(text, kind, line, col):
    with pytest.raises(ParseError) as info:
        parse(text)
    err = info.value
    assert err.kind == kind
    assert (err.line, err.col) == (line, col)
    assert str(err).startswith(f"{line}:{col}: {kind} error:")


def test_comments_and_blank_lines():
    sf = parse("# heading\n\n" + CR + "   # trailing\n")
    assert sf.name == "cr" and len(sf.equations) == 2


def test_round_trip_all_fixtures():
    for fx in FIXTURES.values():
        sf = parse(fx.text)
        again = parse(pretty(sf))
        assert again == sf
        assert pretty(again) == pretty(sf)


def test_ruled_param_jets_expand():
    sf = parse(FIXTURES["killing"].text)
    eq = dict((name, str(p)) for name, p, _ in sf.equations)
    assert "E[1,0]" not in eq["E1"] and "lam[1,0]" in eq["E1"]


def test_exit_codes_by_verdict():
    assert call("compat", "@cr")[0] == 0
    assert call("compat", "@cr_jacobian_G_u")[0] == 1
    assert call("compat", "@commuting_flows")[0] == 2


def test_usage_and_parse_exit_codes(sysfile, capsys):
    assert call("compat")[0] == 3
    assert call("nosuchcommand", "@cr")[0] == 3
    assert call("bracket", "@cr", "--subset", "1,2")[0] == 3
    assert call("compat", "@nosuchfixture")[0] == 3
    path = sysfile("system s\nbase x y\nunknown u\neq F = u[1]\n")
    assert call("compat", path)[0] == 4
    assert "4:8: arity error" in capsys.readouterr().err


def test_budget_exit_code():
    code, text = call("reduce", "@killing", "--max-degree", "1")
    assert code == 2 and "budget exceeded" in text


def test_json_schema():
    code, text = call("compat", "@cr_jacobian_G_u", "--json")
    doc = json.loads(text)
    assert code == 1
    assert doc["schema"] == 1 and doc["command"] == "compat"
    assert doc["system"]["name"] == "cr_jacobian_G_u"
    assert (doc["system"]["n"], doc["system"]["m"], doc["system"]["r"]) == (2, 2, 3)
    assert doc["verdict"] == "obstructed"
    assert doc["brackets"][0]["normal_form"] == "-1"
    assert doc["brackets"][0]["subset"] == [1, 2, 3]


def test_text_output():
    code, text = call("compat", "@cr_jacobian_G_u")
    assert "verdict: obstructed (polynomial model)" in text
    assert "mod J_2 = -1" in text
    code, text = call("dims", "@conics")
    assert code == 0 and "p=0, d=4" in text


def test_subset_gives_inconclusive():
    code, text = call("compat", "@cr_jacobian_G1", "--subset", "1,2,3", "--json")
    assert code == 2 and json.loads(text)["verdict"] == "inconclusive"


def test_invertible_flag(sysfile):
    text = CR + "eq E3 = u[1,0]*v[0,1] - u[0,1]*v[1,0] - u\n"
    path = sysfile(text)
    assert call("compat", path, "--invertible", "u")[0] == 1


def test_other_commands_run():
    for argv in (["symbols", "@cr"], ["spencer", "@conics"], ["gci", "@conics"],
                 ["syzygy", "@commuting_flows"], ["bracket", "@cr_jacobian_G1"]):
        code, text = call(*argv)
        assert code == 0, argv
        assert text.startswith("system ")
        code, text = call(*argv, "--json")
        assert json.loads(text)["command"] == argv[0]


def test_fixtures_commands():
    code, text = call("fixtures", "list")
    assert code == 0 and all(name in text for name in FIXTURES)
    code, text = call("fixtures", "show", "cr")
    assert code == 0 and parse(text) == parse(FIXTURES["cr"].text)
    code, text = call("fixtures", "run", "conics")
    assert code == 0 and text.startswith("PASS conics")
    assert call("fixtures", "show", "nope")[0] == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "jetbracket", "compat", "@cr_jacobian_G_u"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert "obstructed" in proc.stdout

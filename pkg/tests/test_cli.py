import io
import json
import subprocess
import sys

import pytest

from bifuzzy.approx import FiniteLang
from bifuzzy.automaton import Bfdes
from bifuzzy.cli import main, render_report
from bifuzzy.errors import NotNormal, ParseError
from bifuzzy.serialize import (
    automaton_from_dict,
    automaton_to_dict,
    dumps,
    finitelang_from_dict,
    finitelang_to_dict,
    parse_automaton,
    parse_finitelang,
    parse_ucmap,
    report_to_dict,
    ucmap_from_dict,
    ucmap_to_dict,
)
from bifuzzy.supervisory import check_controllability
from helpers import FIXTURES

PLANT = str(FIXTURES / "example2_plant.json")
SPEC = str(FIXTURES / "example2_spec.json")
UC1 = str(FIXTURES / "example2_uc1.json")
UC2 = str(FIXTURES / "example2_uc2.json")
K = str(FIXTURES / "example2_K_h2.json")
M = str(FIXTURES / "example2_M_h2.json")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def load_any(path):
    name = path.name
    if "_uc" in name:
        return parse_ucmap(path), ucmap_to_dict, ucmap_from_dict
    if "_K_" in name or "_M_" in name:
        return parse_finitelang(path), finitelang_to_dict, finitelang_from_dict
    return parse_automaton(path), automaton_to_dict, automaton_from_dict


@pytest.mark.parametrize("path", sorted(FIXTURES.glob("*.json")), ids=lambda p: p.name)
def test_fixture_round_trip(path):
    obj, to_dict, from_dict = load_any(path)
    text = dumps(to_dict(obj))
    again = from_dict(json.loads(text))
    assert again == obj
    assert dumps(to_dict(again)) == text


def test_fixture_types():
    assert isinstance(parse_automaton(PLANT), Bfdes)
    assert isinstance(parse_finitelang(K), FiniteLang)


def test_report_json_round_trips(example2):
    g, r, uc1, _ = example2
    doc = report_to_dict(check_controllability(g, r, uc1))
    assert json.loads(dumps(doc)) == doc
    assert doc["verdict"] == "uncontrollable"
    assert doc["violations"][0]["witness"] == "s1"


def test_human_report_columns(example2):
    g, r, uc1, _ = example2
    text = render_report(check_controllability(g, r, uc1))
    header = next(line for line in text.splitlines() if line.startswith("s "))
    for col in ("σ", "L_G(sσ)", "L_R(s)", "Σuc(σ)", "L_R(sσ)", "holds"):
        assert col in header
    assert text.count("violation:") == len(check_controllability(g, r, uc1).violations)


def test_check_exit_codes():
    code, out, _ = run("check", PLANT, SPEC, UC1)
    assert code == 1
    assert "verdict: uncontrollable" in out and "violation: s=s1 σ=s1" in out
    code, out, _ = run("check", PLANT, SPEC, UC2)
    assert code == 1 and "violation: s=ε σ=s2" in out
    code, out, _ = run("check", "--format", "json", PLANT, PLANT, UC1)
    assert code == 0 and json.loads(out)["verdict"] == "controllable"


def test_check_nonblocking_and_json_out(tmp_path):
    target = tmp_path / "rep.json"
    code, out, _ = run("check", "--nonblocking", "--json-out", str(target), PLANT, SPEC, UC1)
    assert code == 1
    assert "Lm-closure:" in out
    assert json.loads(target.read_text())["nonblocking_achievable"] is False


def test_budget_exit_code():
    code, _, err = run("--budget", "3", "check", PLANT, SPEC, UC1)
    assert code == 3 and "3" in err


def test_eval():
    code, out, _ = run("eval", PLANT, "s1")
    assert code == 0
    assert out.splitlines()[0] == "L(s) = 1/0.9 + 0.8/1"
    code, out, _ = run("eval", PLANT, "")
    assert out.splitlines() == ["L(s) = 1/1", "Lm(s) = 1/1"]


def test_compose(tmp_path):
    code, out, _ = run("compose", PLANT, SPEC)
    assert code == 0
    g = automaton_from_dict(json.loads(out))
    assert g.n == 4 and g.alphabet == ("s1", "s2")
    target = tmp_path / "gr.json"
    assert run("compose", PLANT, SPEC, "-o", str(target))[0] == 0
    assert parse_automaton(target) == g


def test_approx():
    code, out, _ = run("approx", K, M, UC1)
    doc = json.loads(out)
    assert code == 0 and doc["controllable"] is False
    assert doc["witness"]["s"] == "s1"
    assert set(doc["supremal"]["degrees"].values()) == {"1/0.3 + 0.7/0.6"}
    assert doc["infimal"]["degrees"][""] == "1/1"


def test_rank():
    code, out, _ = run("rank", "1/0.9", "1/0.3")
    assert code == 0 and "a ⪰ b: true" in out
    assert run("rank", "1/0.3", "1/0.9")[0] == 1
    assert run("rank", "[0.5,0.9]", "[0.1,0.2]")[0] == 0
    assert run("rank", "[0.5,x]", "1/0.2")[0] == 2


def test_traffic_run_and_compare(tmp_path):
    csv_path = tmp_path / "q.csv"
    code, out, _ = run("traffic", "--rate", "720", "--seed", "1", "--duration", "900", "--csv", str(csv_path))
    assert code == 0
    res = json.loads(out)
    assert res["mode"] == "bfdes" and res["arrival_rate"] == 720
    assert csv_path.read_text().splitlines()[0] == "cycle,avg_queue"
    plots = tmp_path / "plots"
    code, out, _ = run(
        "traffic", "compare", "--rates", "720,1800", "--seeds", "2", "--duration", "900",
        "--queue-csv", str(tmp_path / "series.csv"), "--plot-dir", str(plots),
    )
    assert code == 0
    assert out.splitlines()[0] == "rate,bfdes_davg,fdes_davg,bfdes_std,fdes_std"
    assert len(out.splitlines()) == 3
    assert {p.name for p in plots.iterdir()} == {"queue_rate_720.png", "queue_rate_1800.png", "delay_by_rate.png"}


def test_traffic_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"duration_s": 600, "arrival_rate": 1000}))
    code, out, _ = run("traffic", "--config", str(cfg), "--mode", "fdes")
    assert code == 0 and json.loads(out)["arrival_rate"] == 1000
    cfg.write_text(json.dumps({"duration": 600}))
    code, _, err = run("traffic", "--config", str(cfg))
    assert code == 2 and "unknown config keys" in err
    cfg.write_text(json.dumps({"t_bsc": 99}))
    code, _, err = run("traffic", "--config", str(cfg))
    assert code == 2 and "ConfigInvalid" in err


# --- malformed inputs ------------------------------------------------------------


def _write(tmp_path, name, content):
    p = tmp_path / name
    p.write_text(content if isinstance(content, str) else json.dumps(content))
    return str(p)


PLANT_DOC = json.loads((FIXTURES / "example2_plant.json").read_text())


@pytest.mark.parametrize(
    "content, needle",
    [
        ("{not json", ":1:2"),
        ({"states": ["a"], "x0": ["1/1"]}, "missing required field 'events'"),
        ({**PLANT_DOC, "x0": ["1/1", "0.5/0.3"]}, "x0[1]"),
        ({**PLANT_DOC, "x0": ["1/1", "1/0", "1/0"]}, "DimensionMismatch"),
        ({**PLANT_DOC, "events": {"s1": [["1/1", 3], ["1/1", "1/1"]]}}, "events.s1[0][1]"),
        ({**PLANT_DOC, "events": {"s1": [["1/1", "1/0"], ["1 over 1", "1/1"]]}}, "events.s1[1][0]"),
        ([1, 2], "expected a JSON object"),
    ],
)
def test_malformed_plant(tmp_path, content, needle):
    bad = _write(tmp_path, "bad.json", content)
    code, _, err = run("check", bad, SPEC, UC1)
    assert code == 2
    assert "bad.json" in err and needle in err


def test_non_normal_degree_names_invariant(tmp_path):
    bad = _write(tmp_path, "uc.json", {"s1": "0.5/0.3", "s2": "1/0"})
    with pytest.raises(NotNormal):
        parse_ucmap(bad)
    code, _, err = run("check", PLANT, SPEC, bad)
    assert code == 2 and "NotNormal" in err and "uc.json.s1" in err


def test_missing_file():
    code, _, err = run("check", "/nonexistent/plant.json", SPEC, UC1)
    assert code == 2 and "/nonexistent/plant.json" in err


def test_malformed_language(tmp_path):
    bad = _write(tmp_path, "k.json", {"horizon": 2, "alphabet": ["s1"], "degrees": {"s1..s1": "1/1"}})
    with pytest.raises(ParseError, match="k.json.degrees"):
        parse_finitelang(bad)
    assert run("approx", bad, M, UC1)[0] == 2
    too_long = _write(tmp_path, "k2.json", {"horizon": 1, "alphabet": ["s1"], "degrees": {"s1.s1": "1/1"}})
    assert run("approx", too_long, M, UC1)[0] == 2


def test_alphabet_mismatch_and_unknown_event(tmp_path):
    bad = _write(tmp_path, "uc.json", {"s1": "1/1"})
    code, _, err = run("check", PLANT, SPEC, bad)
    assert code == 2 and "AlphabetMismatch" in err
    code, _, err = run("eval", PLANT, "s1.zz")
    assert code == 2 and "zz" in err


def test_usage_errors():
    assert run()[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("--budget", "0", "check", PLANT, SPEC, UC1)[0] == 2
    assert run("--grid", "0.3", "rank", "1/1", "1/0")[0] == 2
    assert run("traffic", "compare", "--rates", "a,b")[0] == 2


def test_unwritable_output():
    code, _, err = run("compose", PLANT, SPEC, "-o", "/nonexistent/dir/out.json")
    assert code == 2 and "out.json" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "bifuzzy", "eval", PLANT, "s1.s1"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "L(s) = 1/0.6 + 0.6/0.9"

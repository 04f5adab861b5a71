import csv
import io
import json
import math

import pytest

from biortho.cli import RunReport, main, parse_complex, run
from biortho.hyp import Params, eval_P


def run_json(*argv):
    code, text = run(list(argv))
    return code, json.loads(text)


def test_parse_complex():
    assert parse_complex("1.5,-2") == complex(1.5, -2)
    assert parse_complex("3") == 3


def test_eval_values():
    code, doc = run_json("eval", "--n", "0")
    assert code == 0 and doc["schema"] == 1
    assert doc["outputs"][0]["value"] == {"re": 1.0, "im": 0.0}
    _, doc = run_json("eval", "--n", "1", "--z", "0,0", "--alpha", "1,0", "--beta", "0,0")
    assert doc["outputs"][0]["value"]["re"] == pytest.approx(1 / 3)
    _, doc = run_json("eval", "--n", "5", "--z", "-2,0", "--z", "0.5,0.5")
    val = doc["outputs"][0]["value"]
    assert complex(val["re"], val["im"]) == eval_P(5, -2, Params(1, 0.25))
    assert len(doc["outputs"]) == 2


def test_eval_Q():
    _, doc = run_json("eval", "--n", "3", "--z", "0.2,0.4", "--which", "Q")
    assert doc["inputs"]["which"] == "Q"


def test_usage_errors():
    assert run(["eval", "--n", "2", "--z", "x,y"])[0] == 2
    with pytest.raises(SystemExit) as info:
        run(["eval"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        run(["nonsense"])
    assert info.value.code == 2


def test_domain_error_exit_code():
    code, text = run(["eval", "--n", "4", "--alpha", "-1.5,0", "--beta", "0,0"])
    assert code == 3 and "ParameterPole" in text


def test_certify_default_grid_passes():
    code, doc = run_json("certify-expansion")
    assert code == 0 and doc["pass"] is True
    assert len(doc["outputs"]) == 2 * 4 * 5


def test_certify_single_point_and_excluded_point():
    code, doc = run_json("certify-expansion", "--n-list", "40", "--z-list", "-2,0")
    assert code == 0 and doc["pass"]
    code, doc = run_json("certify-expansion", "--n-list", "40", "--z-list", "1,0;-2,0")
    assert code == 3 and doc["pass"] is False
    bad = [r for r in doc["outputs"] if "error_message" in r]
    assert len(bad) == 2 and all("DomainError" in r["error_message"] for r in bad)


def test_certify_is_deterministic():
    args = ["certify-expansion", "--n-list", "5,20", "--p1", "2", "--p2", "1"]
    assert run(args)[1] == run(args)[1]


def test_askey_command():
    code, doc = run_json("askey", "--n", "10,1000", "--theta", f"0,{math.pi / 2}", "--k", "0")
    assert code == 0
    zero = [r for r in doc["outputs"] if r["theta"] == 0]
    assert all(r["error"] == 0 for r in zero)
    for r in doc["outputs"]:
        assert r["error"] <= r["remainder_bound"] + r["roundoff_bound"]


def test_askey_csv_sweep():
    code, text = run(["askey", "--n", "10,100,1000", "--theta", "1.5", "--format", "csv"])
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["index", "field", "re", "im"]
    errors = [float(r[2]) for r in rows[1:] if r[1] == "error"]
    assert len(errors) == 6


def test_electro_command():
    code, doc = run_json("electro", "--n", "1", "--p", "1", "--q", "0", "--starts", "2")
    out = doc["outputs"][0]
    assert out["root_angles"] == pytest.approx([math.pi])
    assert all(m == pytest.approx([math.pi], abs=1e-8) for m in out["minimizer_angles"])
    code, doc = run_json("electro", "--n", "4", "--p", "2", "--q", "0.3", "--starts", "5")
    assert code == 0 and doc["outputs"][0]["max_deviation"] < 1e-6
    assert len(doc["outputs"][0]["minimizer_angles"]) == 5


def test_electro_seed_controls_output():
    a = run(["electro", "--n", "3", "--p", "1", "--seed", "4"])[1]
    b = run(["electro", "--n", "3", "--p", "1", "--seed", "4"])[1]
    assert a == b


def test_biorth_command():
    code, doc = run_json("biorth", "--nmax", "3")
    assert code == 0 and doc["pass"]
    summaries = [r for r in doc["outputs"] if "max_off_diagonal" in r]
    assert all(s["max_off_diagonal"] < 1e-8 for s in summaries)
    _, doc = run_json("biorth", "--nmax", "0", "--alpha", "1,0", "--beta", "0,0")
    entries = [r for r in doc["outputs"] if "value" in r]
    assert len(entries) == 1
    assert entries[0]["value"]["re"] == pytest.approx(2)


def test_out_file_and_timing(tmp_path):
    target = tmp_path / "report.json"
    code, text = run(["eval", "--n", "2", "--out", str(target), "--timing"])
    assert code == 0 and text == ""
    doc = json.loads(target.read_text())
    assert isinstance(doc["timing_ms"], int)


def test_report_csv_layout():
    rep = RunReport("x", {}, [{"v": 1 + 2j, "flag": True, "xs": [1.5, 2]}])
    rows = rep.to_csv().splitlines()
    assert rows == ["index,field,re,im", "0,flag,true,", "0,v,1.0,2.0", "0,xs[0],1.5,", "0,xs[1],2,"]


def test_main_writes_streams(capsys):
    assert main(["eval", "--n", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["command"] == "eval"
    assert main(["eval", "--n", "1", "--z", "a"]) == 2
    assert "cannot parse" in capsys.readouterr().err

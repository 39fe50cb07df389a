from __future__ import annotations

import json
import subprocess
import sys

import pytest

from colorenergy import generate_coloring, save_coloring
from colorenergy.cli import main, run_experiment

from conftest import k4_matchings


@pytest.fixture
def files(tmp_path):
    k5 = tmp_path / "k5_proper.json"
    save_coloring(generate_coloring(5, "round_robin"), k5)
    k4 = tmp_path / "k4_matchings.json"
    save_coloring(k4_matchings(), k4)
    return tmp_path, k5, k4


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_verify(files, capsys):
    _, k5, _ = files
    code, out, _ = run(["verify", "--p", "3", "--q", "3", "--input", str(k5)], capsys)
    assert code == 0 and json.loads(out)["verdict"] is True


def test_energy(files, capsys):
    _, _, k4 = files
    code, out, _ = run(["energy", "--r", "2", "--input", str(k4)], capsys)
    data = json.loads(out)
    assert data["paper_edge_statistic"] == 12 and data["holder_bound_float"] == 3.0
    assert data["edge_count_exact"] == 24 and data["certificate_ok"]


def test_error_object_on_stderr(files, capsys):
    _, k5, _ = files
    code, out, err = run(["verify", "--p", "3", "--input", str(k5)], capsys)
    assert code != 0 and out == ""
    assert json.loads(err)["error"] == "InvalidParams"
    code, _, err = run(["exact", "--n", "12", "--p", "3", "--q", "3"], capsys)
    assert code != 0 and json.loads(err)["error"] == "CapExceeded"


def test_replay_is_byte_identical(files):
    tmp, _, _ = files
    log = tmp / "log.ndjson"
    a = run_experiment("gen", {"n": 9, "scheme": "random", "colors": 4}, seed=11,
                       output_path=tmp / "a.json", log_path=log)
    rec = json.loads(log.read_text().splitlines()[0])
    b = run_experiment(rec["command"], rec["params"], seed=rec["seed"], output_path=tmp / "b.json")
    assert (tmp / "a.json").read_bytes() == (tmp / "b.json").read_bytes()
    assert a.output_digest == b.output_digest == rec["output_digest"]


def test_seed_from_environment(files, monkeypatch, capsys):
    monkeypatch.setenv("COLORENERGY_SEED", "5")
    _, env_out, _ = run(["gen", "--n", "6", "--scheme", "random", "--colors", "3"], capsys)
    _, flag_out, _ = run(["gen", "--n", "6", "--scheme", "random", "--colors", "3",
                          "--seed", "5"], capsys)
    _, other, _ = run(["gen", "--n", "6", "--scheme", "random", "--colors", "3",
                       "--seed", "6"], capsys)
    assert env_out == flag_out != other


def test_plant_prune_witness_reveal(files, capsys):
    tmp, _, _ = files
    g, part = tmp / "pl.json", tmp / "part.json"
    assert main(["gen", "--n", "60", "--plant", "cycle_star:3,6", "--r", "2",
                 "--partition-out", str(part), "--output", str(g)]) == 0
    code, out, _ = run(["prune", "--r", "2", "--partition", str(part), "--input", str(g)], capsys)
    assert code == 0 and json.loads(out)["properties_ok"]
    code, out, _ = run(["witness", "--pipeline", "theta", "--r", "2", "--a", "3", "--b", "2",
                        "--partition", str(part), "--input", str(g)], capsys)
    rep = json.loads(out)
    assert code == 0 and (rep["p_claimed"], rep["q_claimed"]) == (12, 61)
    code, out, _ = run(["reveal", "--r", "2", "--pattern", "path:4", "--partition", str(part),
                        "--input", str(g)], capsys)
    led = json.loads(out)
    assert led["found"] and led["aggregates"]["N"] + led["aggregates"]["S"] + \
        led["aggregates"]["D"] == 2 * led["m"]


def test_greedy_and_exponents_csv(files, capsys):
    tmp, _, _ = files
    g = tmp / "mono.json"
    g.write_text(json.dumps({"n": 6, "edges": [0] * 15}))
    code, out, _ = run(["witness", "--pipeline", "greedy", "--k", "3", "--m", "1",
                        "--input", str(g)], capsys)
    assert code == 0 and json.loads(out)["distinct_colors"] == 1
    code, out, _ = run(["exponents", "--theorem", "theta", "--params", "r=2,a=3,b=2",
                        "--format", "csv"], capsys)
    lines = out.strip().splitlines()
    assert len(lines) == 2 and "4/3" in lines[1] and "5/3" in lines[1]


def test_report_summarizes_log(files, capsys):
    tmp, k5, _ = files
    log = tmp / "log.ndjson"
    main(["verify", "--p", "3", "--q", "3", "--input", str(k5), "--log", str(log)])
    main(["exact", "--n", "4", "--p", "3", "--q", "3", "--log", str(log)])
    capsys.readouterr()
    code, out, _ = run(["report", "--from-log", str(log)], capsys)
    rows = json.loads(out)
    assert [r["command"] for r in rows] == ["verify", "exact"]


def test_module_entry_point(files):
    _, k5, _ = files
    proc = subprocess.run([sys.executable, "-m", "colorenergy", "verify", "--p", "3", "--q", "3",
                           "--input", str(k5)], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["verdict"]

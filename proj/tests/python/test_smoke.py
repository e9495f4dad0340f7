import json
import math
import os
import subprocess
import xml.etree.ElementTree as ET

import pytest

import modelcascade as mc

MODELS = [("mini", 0.7), ("medium", 0.78), ("base", 0.86)]


@pytest.fixture(scope="module")
def bundle():
    return mc.synth(1000, 2, MODELS, sharpness=2.5, seed=11)


def test_confidences():
    assert mc.normalize_scores([0.0, 0.0]) == [0.5, 0.5]
    p = mc.normalize_scores([2.0, 0.0])
    assert abs(p[0] - 0.8808) < 1e-4
    assert mc.max_prob([0.1, 0.6, 0.3]) == 0.6
    assert abs(mc.dtu([0.9, 0.1]) - 0.56569) < 1e-5
    assert mc.heuristic_conf(50, 100) == 0.5
    assert mc.random_conf(1, "a", 1) == mc.random_conf(1, "a", 1)


def test_costs():
    assert mc.instance_cost("mini", 100) == 0.31e9
    assert mc.instance_cost("medium", 120) + mc.instance_cost("base", 120) == 13.21e9
    assert math.isclose(mc.instance_cost("mini", 110), 0.345e9)


def test_endpoints(bundle):
    lo, hi = mc.threshold_bounds(bundle)
    first = mc.simulate(bundle, [lo, lo])
    assert first["accuracy"] == bundle.standalone_accuracy("mini")
    assert first["mean_cost"] == bundle.standalone_cost("mini")
    last = mc.simulate(bundle, [hi, hi])
    assert last["accuracy"] == bundle.standalone_accuracy("base")
    assert all(o["used"] == ["mini", "medium", "base"] for o in last["outcomes"])


def test_sweep_and_analysis(bundle):
    maxprob = mc.sweep(bundle, policy="maxprob")
    random = mc.sweep(bundle, policy="random", seed=3)
    assert maxprob["auc"] > random["auc"]
    frontier = maxprob["frontier"]
    costs = [p["mean_cost"] for p in frontier]
    assert costs == sorted(costs)
    assert frontier[0]["accuracy"] == bundle.standalone_accuracy("mini")

    point = frontier[len(frontier) // 2]
    report = mc.contribution(bundle, point["thresholds"])
    weighted = sum(m["answered_fraction"] * (m["accuracy_on_answered"] or 0.0) / 100 for m in report["models"])
    assert abs(weighted - report["overall_accuracy"]) < 1e-9

    tuned = mc.tune(bundle, 3e9)
    assert tuned["validation_cost"] <= 3e9


def test_metrics():
    assert mc.auc([(0, 80), (1, 80)]) == 80.0
    assert mc.auc([(0, 70), (1, 90)]) == 80.0
    assert mc.pareto_frontier([(1, 70), (1, 75), (2, 75)]) == [(1, 75)]


def test_errors(bundle):
    with pytest.raises(mc.CascadeError, match="ThresholdOutOfRange"):
        mc.simulate(bundle, [2.0, 0.5])
    with pytest.raises(mc.CascadeError, match="RoutingRequiresK3"):
        mc.simulate(bundle, [0.8], models=["mini", "base"], mode="routing", skips=[0.6])
    with pytest.raises(mc.CascadeError, match="InvalidSpec"):
        mc.synth(0, 2, MODELS)


def test_bundle_round_trip_and_cli(tmp_path, bundle):
    mc.write_bundle(bundle, tmp_path / "b")
    again = mc.load_bundle(tmp_path / "b")
    assert again.size == bundle.size and again.model_ids == bundle.model_ids

    code, out, _ = mc.run_cli(["plot", "--bundle", str(tmp_path / "b"), "--out", str(tmp_path / "p")])
    assert code == 0
    root = ET.parse(tmp_path / "p" / "curve.svg").getroot()
    assert root.tag.endswith("svg")

    code, _, err = mc.run_cli(["sweep", "--bundle", str(tmp_path / "b"), "--policy", "nope", "--out", str(tmp_path)])
    assert code == 3 and "policy" in err


def test_cli_binary_replay(tmp_path):
    exe = os.environ.get("CASCADE_CLI")
    if not exe:
        pytest.skip("CASCADE_CLI not set")
    subprocess.run([exe, "synth", "--n", "300", "--model", "mini:0.7", "--model", "base:0.85", "--out",
                    str(tmp_path / "b")], check=True, capture_output=True)
    subprocess.run([exe, "sweep", "--bundle", str(tmp_path / "b"), "--policy", "random", "--out",
                    str(tmp_path / "s")], check=True, capture_output=True)
    manifest = json.loads((tmp_path / "s" / "manifest.json").read_text())
    assert manifest["command"] == "sweep"
    r = subprocess.run([exe, "replay", "--manifest", str(tmp_path / "s" / "manifest.json"), "--out",
                        str(tmp_path / "r")], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert (tmp_path / "s" / "curve.csv").read_bytes() == (tmp_path / "r" / "curve.csv").read_bytes()

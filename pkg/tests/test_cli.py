import json
import subprocess
import sys

import pytest

from conncover.cli import main

SPHERE = "1 2 3\n2 4 5\n3 4 5\n1 3 4\n2 3 5\n1 2 4\n"


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr().out
    return code, json.loads(out), out


@pytest.fixture
def files(tmp_path):
    k5 = {"graph": "D~{", "members": [[0, 1, 2, 3], [0, 1, 2, 4], [0, 1, 3, 4], [0, 2, 3, 4], [1, 2, 3, 4]]}
    k3 = {"graph": "Bw", "members": [[0, 1], [0, 2], [1, 2]]}
    apart = {"graph": "Ch", "members": [[0], [1], [2], [3]]}
    bad = {"graph": "Cl", "members": [[0, 1, 2], [0, 2, 3]]}
    paths = {}
    for name, data in {"k5": k5, "k3": k3, "apart": apart, "bad": bad}.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(data))
        paths[name] = str(p)
    sphere = tmp_path / "sphere.txt"
    sphere.write_text(SPHERE)
    paths["sphere"] = str(sphere)
    tree = tmp_path / "tree.txt"
    tree.write_text("1 2\n2 3\n2 4\n4 5\n")
    paths["tree"] = str(tree)
    return paths


def test_gamma_named_graphs(capsys):
    code, rep, _ = run(capsys, "gamma", "W8")
    assert code == 0 and rep["status"] == "ok"
    assert rep["result"]["lower"] == rep["result"]["upper"] == 2
    _, rep, _ = run(capsys, "gamma", "K6")
    assert rep["result"]["lower"] == rep["result"]["upper"] == 4
    _, rep, _ = run(capsys, "gamma", "K2,2,2,2")
    assert rep["result"]["lower"] == rep["result"]["upper"] == 4
    assert rep["result"]["upper_rule"] == "complete multipartite"


def test_gamma_graph6_and_edge_list(capsys, files):
    _, rep, _ = run(capsys, "gamma", "GhdHKc")  # W8 in graph6
    assert rep["result"]["lower"] == 2
    _, rep, _ = run(capsys, "gamma", files["tree"])
    assert rep["result"]["upper"] == 0 and rep["result"]["upper_rule"] == "forest"


def test_gamma_parse_failure_exits_2(capsys):
    code, rep, _ = run(capsys, "gamma", "!!bad!!")
    assert code == 2 and rep["status"] == "error"


def test_nerve_betti_validate(capsys, files):
    code, rep, _ = run(capsys, "nerve", files["k5"])
    assert code == 0 and rep["result"]["betti"] == [0, 0, 0, 1]
    assert len(rep["result"]["maximal_faces"]) == 5
    _, rep, _ = run(capsys, "betti", files["k3"])
    assert rep["result"]["betti"] == [0, 1]
    code, rep, _ = run(capsys, "validate", files["bad"])
    assert code == 2 and rep["result"]["violation"] == [0, 1]


def test_betti_complex_input(capsys, files):
    _, rep, _ = run(capsys, "betti", "--complex", files["sphere"])
    assert rep["result"]["betti"] == [0, 0, 1]


def test_minor_pierce_pq_helly(capsys, files):
    _, rep, _ = run(capsys, "minor", "W8", "K5")
    assert rep["result"]["certificate"] == "none"
    _, rep, _ = run(capsys, "minor", "W8", "K4")
    assert rep["result"]["found"] is True
    _, rep, _ = run(capsys, "pierce", files["apart"])
    assert rep["result"]["size"] == 4
    _, rep, _ = run(capsys, "pq", files["k5"], "4", "4")
    assert rep["result"]["holds"] is True
    _, rep, _ = run(capsys, "helly", files["k5"])
    assert rep["result"]["helly_number"] == 5 and "certificate" in rep["result"]


def test_tchain(capsys, files, tmp_path):
    _, rep, _ = run(capsys, "tchain", files["sphere"])
    assert rep["result"]["T"] == [[1, 2, 3, 5], [1, 2, 4, 5], [1, 3, 4, 5]]
    assert rep["result"]["equals_tau"] is True
    order = tmp_path / "order.txt"
    lines = SPHERE.splitlines()
    order.write_text("\n".join([lines[1], lines[0]] + lines[2:]) + "\n")
    _, rep, _ = run(capsys, "tchain", files["sphere"], "--order-file", str(order))
    assert rep["result"]["T"] == [[1, 2, 3, 4], [2, 3, 4, 5]]
    not_cycle = tmp_path / "open.txt"
    not_cycle.write_text("1 2 3\n")
    code, _, _ = run(capsys, "tchain", str(not_cycle))
    assert code == 2


def test_search_statuses(capsys):
    _, rep, _ = run(capsys, "search", "C5", "1")
    assert rep["result"]["status"] == "found" and rep["status"] == "ok"
    _, rep, _ = run(capsys, "search", "P5", "1")
    assert rep["result"]["status"] == "absent-within-enumerated-space"
    code, rep, _ = run(capsys, "search", "K6", "3", "--budget-pool", "10")
    assert code == 0 and rep["status"] == "unknown-budget-exhausted"


def test_cap_exceeded_exits_4(capsys):
    code, rep, _ = run(capsys, "gamma", "C20", "--cap-vertices", "10")
    assert code == 4 and rep["status"] == "error"


def test_reproduce(capsys):
    code, rep, _ = run(capsys, "reproduce", "w8")
    assert code == 0 and all(c["passed"] for c in rep["result"]["checks"])
    code, rep, _ = run(capsys, "reproduce", "sphere-tchain")
    assert code == 0
    code, _, _ = run(capsys, "reproduce", "nope")
    assert code == 2


def test_output_is_deterministic(capsys, files):
    _, _, first = run(capsys, "reproduce", "sphere-tchain", "--seed", "3")
    _, _, second = run(capsys, "reproduce", "sphere-tchain", "--seed", "3")
    assert first == second
    _, a, _ = run(capsys, "gamma", "W8")
    _, b, _ = run(capsys, "gamma", "W8", "--budget-members", "5")
    assert a["inputs"] != b["inputs"] and a["result"] == b["result"]


def test_timing_only_on_request(capsys):
    _, rep, _ = run(capsys, "gamma", "K4")
    assert "timing_ms" not in rep
    _, rep, _ = run(capsys, "gamma", "K4", "--timing")
    assert rep["timing_ms"] >= 0


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "conncover.cli", "gamma", "K3"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["result"]["lower"] == 1

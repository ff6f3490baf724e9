import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from conftest import FIXTURES
from sfmodules.cli import main

FIXTURE_FILES = sorted(p.name for p in FIXTURES.iterdir() if p.suffix in (".sfd", ".qhc"))

PROTOTYPE_L = [
    [2, 0, 0, 0, -1, -1, 0, 0],
    [0, 1, 0, 0, 0, -1, 0, 0],
    [0, 0, 1, 0, 0, 0, -1, 0],
    [0, 0, 0, 1, 0, 0, 0, -1],
    [-1, 0, 0, 0, 1, 0, 0, 0],
    [-1, -1, 0, 0, 0, 2, 0, 0],
    [0, 0, -1, 0, 0, 0, 1, 0],
    [0, 0, 0, -1, 0, 0, 0, 1],
]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    header = rows[0][1:]
    assert [r[0] for r in rows[1:]] == header
    return header, [r[1:] for r in rows[1:]]


def test_analyze_prototype_json(capsys):
    code, out, _ = run(capsys, "analyze", FIXTURES / "prototype.sfd", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["spectrum"]["zero_multiplicity"] == 3
    assert rep["partitions"]["oracle"] == [["F1", "F2", "S1", "S2"], ["F3", "S3"], ["F4", "S4"]]
    assert rep["design"]["inheritance"] == [{"functional": "F1", "providers": ["S1", "S2"]}]
    assert rep["agreement"]["all"] is True


def test_analyze_grover_variants(capsys):
    code, out, _ = run(capsys, "analyze", FIXTURES / "grover.qhc", "--json")
    rep = json.loads(out)
    assert code == 0 and len(rep["modules"]) == 4
    assert rep["design"]["sequence"] == ["S1", "S2", "S3", "S4"]
    code, out, _ = run(capsys, "analyze", FIXTURES / "grover_coupled.qhc", "--json")
    rep = json.loads(out)
    assert code == 0 and len(rep["modules"]) == 3
    middle = rep["modules"][1]
    assert (middle["structors"], middle["functionals"]) == (2, 2)


def test_analyze_text_report(capsys):
    code, out, _ = run(capsys, "analyze", FIXTURES / "prototype.sfd")
    assert code == 0
    assert "zero multiplicity: 3" in out
    assert "inheritance: F1 provided by {S1, S2}" in out
    assert "methods agree: yes" in out


def test_analyze_verbose_projectors_and_matrices(capsys):
    code, out, _ = run(capsys, "analyze", FIXTURES / "prototype.sfd", "--json", "--verbose-projectors", "--matrices")
    rep = json.loads(out)
    assert rep["projectors"]["classes"][0]["terms"][0] == "0.1 · (|000⟩-|100⟩)(⟨000|-⟨100|)"
    assert rep["matrices"]["laplacian"] == PROTOTYPE_L
    assert rep["matrices"]["density"][0][:2] == [0.2, 0.0]


def test_format_flag_overrides_extension(tmp_path, capsys):
    path = tmp_path / "proto.txt"
    path.write_text((FIXTURES / "prototype.sfd").read_text())
    assert run(capsys, "analyze", path)[0] == 1
    assert run(capsys, "analyze", path, "--format", "design")[0] == 0


def test_json_design_input(tmp_path, capsys):
    path = tmp_path / "d.json"
    path.write_text(json.dumps({"name": "j", "structors": [{"id": "S1", "name": "a"}],
                                "functionals": [{"id": "F1", "name": "b"}], "provides": [["S1", "F1"]]}))
    code, out, _ = run(capsys, "analyze", path, "--json")
    assert code == 0 and json.loads(out)["design"]["name"] == "j"


def test_matrices_laplacian_csv(capsys, tmp_path):
    out_path = tmp_path / "L.csv"
    code, _, _ = run(capsys, "matrices", FIXTURES / "prototype.sfd", "laplacian", "-o", out_path)
    assert code == 0
    header, body = read_csv(out_path.read_text())
    assert header == ["F1", "F2", "F3", "F4", "S1", "S2", "S3", "S4"]
    assert [[int(x) for x in row] for row in body] == PROTOTYPE_L


def test_matrices_density_csv(capsys):
    code, out, _ = run(capsys, "matrices", FIXTURES / "prototype.sfd", "density")
    assert code == 0
    _, body = read_csv(out)
    rho = np.array([[float(x) for x in row] for row in body])
    assert np.max(np.abs(rho - 0.1 * np.array(PROTOTYPE_L))) <= 1e-15
    # cells are exact round-trip reprs of the stored doubles
    assert body[0][0] == repr(0.2) and body[0][4] == repr(-0.1)


def test_matrices_single_edge_degree(capsys):
    code, out, _ = run(capsys, "matrices", FIXTURES / "single_edge.sfd", "degree")
    assert code == 0
    _, body = read_csv(out)
    assert body == [["1", "0"], ["0", "1"]]


@pytest.mark.parametrize("which", ["adjacency", "degree"])
def test_matrices_integer_kinds(capsys, which):
    code, out, _ = run(capsys, "matrices", FIXTURES / "prototype.sfd", which)
    _, body = read_csv(out)
    M = np.array([[int(x) for x in row] for row in body])
    L = np.array(PROTOTYPE_L)
    expected = np.diag(np.diag(L)) if which == "degree" else np.diag(np.diag(L)) - L
    assert code == 0 and np.array_equal(M, expected)


def test_split_outlier(capsys):
    code, out, _ = run(capsys, "split", FIXTURES / "outlier.sfd", "S2", "--json")
    rep = json.loads(out)
    assert code == 0
    assert rep["valid"] and rep["cut"] == [["S2", "F3"]]
    assert rep["side_a"] == ["F1", "F2", "S1", "S2"]
    assert rep["density"] == 0.4375 and rep["recommended"]


def test_split_two_vertex_module_exit_4(capsys):
    code, out, _ = run(capsys, "split", FIXTURES / "prototype.sfd", "F3")
    assert code == 4
    assert "valid: no" in out


def test_split_prototype_with_threshold(capsys):
    code, out, _ = run(capsys, "split", FIXTURES / "prototype.sfd", "F1", "--split-threshold", "0.9", "--json")
    rep = json.loads(out)
    assert code == 0
    assert rep["density"] == 0.75 and rep["threshold"] == 0.9 and rep["recommended"]
    code, out, _ = run(capsys, "split", FIXTURES / "prototype.sfd", "F1", "--json")
    assert code == 0 and not json.loads(out)["recommended"]


def test_split_unknown_selector(capsys):
    code, _, err = run(capsys, "split", FIXTURES / "prototype.sfd", "S9")
    assert code == 1 and "S9" in err


def _dot_stats(text):
    lines = text.splitlines()
    clusters = [k for k, l in enumerate(lines) if l.strip().startswith("subgraph cluster_")]
    nodes = [l for l in lines if "[shape=" in l]
    edges = [l for l in lines if " -- " in l]
    return lines, clusters, nodes, edges


def test_dot_prototype(capsys):
    code, out, _ = run(capsys, "dot", FIXTURES / "prototype.sfd")
    _, clusters, nodes, edges = _dot_stats(out)
    assert code == 0
    assert out.startswith('graph "prototype" {')
    assert (len(clusters), len(nodes), len(edges)) == (3, 8, 5)
    assert sum("shape=box" in n for n in nodes) == 4


def test_dot_single_edge(capsys, tmp_path):
    path = tmp_path / "g.dot"
    assert run(capsys, "dot", FIXTURES / "single_edge.sfd", "-o", path)[0] == 0
    _, clusters, nodes, edges = _dot_stats(path.read_text())
    assert (len(clusters), len(nodes), len(edges)) == (1, 2, 1)


def test_dot_grover_coupled_middle_cluster(capsys):
    code, out, _ = run(capsys, "dot", FIXTURES / "grover_coupled.qhc")
    lines, clusters, _, _ = _dot_stats(out)
    middle = lines[clusters[1]:clusters[2]]
    assert sum("[shape=" in l for l in middle) == 4


@pytest.mark.parametrize(
    "content, suffix, code",
    [
        ('structor S1 "a"\nfunctional F1 "f"\nprovides S9 F1\n', ".sfd", 1),
        ("# nothing\n", ".sfd", 1),
        ("qubits 0\n", ".qhc", 1),
        ('structor S1 "a"\nfunctional F1 "f"\n', ".sfd", 2),
    ],
)
@pytest.mark.parametrize("command", ["analyze", "matrices", "dot"])
def test_error_exit_codes(tmp_path, capsys, content, suffix, code, command):
    path = tmp_path / f"bad{suffix}"
    path.write_text(content)
    argv = [command, path] + (["laplacian"] if command == "matrices" else [])
    got, _, err = run(capsys, *argv)
    assert got == code
    assert err.startswith("error:")


def test_disagreement_exit_3(capsys):
    code, _, err = run(capsys, "analyze", FIXTURES / "prototype.sfd", "--tolerance", "0.6")
    assert code == 3 and "disagree" in err
    assert run(capsys, "split", FIXTURES / "prototype.sfd", "F1", "--tolerance", "0.6")[0] == 3


def test_missing_file_and_usage_errors(capsys, tmp_path):
    assert run(capsys, "analyze", tmp_path / "missing.sfd")[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["matrices", str(FIXTURES / "prototype.sfd"), "spectrum"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1


@pytest.mark.parametrize("name", FIXTURE_FILES)
def test_golden_reports(capsys, name):
    code, out, _ = run(capsys, "analyze", FIXTURES / name, "--json")
    golden = FIXTURES / "golden" / (name.rsplit(".", 1)[0] + ".json")
    assert code == 0
    assert out == golden.read_text(encoding="utf-8")


def test_reports_byte_identical_across_processes():
    outs = [
        subprocess.run([sys.executable, "-m", "sfmodules.cli", "analyze", str(FIXTURES / "outlier.sfd"), "--json"],
                       capture_output=True, check=True).stdout
        for _ in range(2)
    ]
    assert outs[0] == outs[1]

"""Command-line driver: exit codes, JSON output shapes, determinism, and the
file-writing options.  Everything goes through main(argv) on temp files."""

import json

import pytest

from dtspan.cli import main

ALL_ONE = {
    "labels": ["x0", "x1", "x2"],
    "matrix": [["0", "1", "1"], ["1", "0", "1"], ["1", "1", "0"]],
}
ONE_WAY = {"labels": ["s", "t"], "matrix": [["0", "1"], ["0", "0"]]}
TRIANGLE_NET = {
    "vertices": ["s", "x", "t"],
    "edges": [
        {"tail": "s", "head": "x", "cap": 1},
        {"tail": "x", "head": "t", "cap": 1},
        {"tail": "t", "head": "s", "cap": 1},
    ],
    "terminals": ["s", "t"],
}


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    return tmp_path, write


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_validate(files, capsys):
    _, write = files
    code, out = run(capsys, ["validate", write("m.json", ALL_ONE)])
    assert code == 0
    assert out == {"labels": ["x0", "x1", "x2"], "n": 3, "metric": True}


def test_validate_rejects_negative_entry(files, capsys):
    _, write = files
    bad = {"labels": ["a", "b"], "matrix": [["0", "-1"], ["1", "0"]]}
    code, out = run(capsys, ["validate", write("m.json", bad)])
    assert code == 1
    assert out["error"]["code"] == "NegativeEntry"


def test_check_tree(files, capsys):
    _, write = files
    code, out = run(capsys, ["check", "tree", write("m.json", ALL_ONE)])
    assert code == 0
    assert out["tree_condition"] is True
    assert out["violator"] is None
    assert out["tropical_rank"] == 2


def test_check_path_reports_violator(files, capsys):
    _, write = files
    code, out = run(capsys, ["check", "path", write("m.json", ALL_ONE)])
    assert code == 0
    assert out["path_condition"] is False
    assert out["dim_tight_span"] == 2
    assert len(out["violator"]) == 4
    assert set(out["violator"]) <= set(ALL_ONE["labels"])


def test_check_dtm(files, capsys):
    _, write = files
    code, out = run(capsys, ["check", "dtm", write("m.json", ONE_WAY)])
    assert code == 0
    assert out == {"directed_tree_metric": True}


def test_rank_and_dim(files, capsys):
    _, write = files
    path = write("m.json", ALL_ONE)
    code, out = run(capsys, ["rank", path])
    assert code == 0
    assert out["tropical_rank"] == 2
    assert len(out["witness"]["matching"]) == 2
    code, out = run(capsys, ["dim", path])
    assert code == 0
    assert out["dim_tight_span"] == 2


def test_complex_commands(files, capsys):
    _, write = files
    path = write("m.json", ALL_ONE)
    code, out = run(capsys, ["tightspan", path])
    assert code == 0
    assert out["which"] == "T" and out["dim"] == 2 and len(out["vertices"]) == 5
    code, out = run(capsys, ["qplus", path])
    assert code == 0 and out["which"] == "Qplus"
    code, out = run(capsys, ["section", path])
    assert code == 0 and out["which"] == "Section" and out["dim"] == 1


def test_skeleton_with_dot(files, capsys):
    tmp_path, write = files
    dot = tmp_path / "out.dot"
    code, out = run(
        capsys, ["skeleton", write("m.json", ALL_ONE), "--dot", str(dot)]
    )
    assert code == 0
    assert len(out["arcs"]) == 3
    assert dot.read_text().startswith("digraph")
    # the tight span of this distance is two-dimensional
    code, out = run(capsys, ["skeleton", write("m.json", ALL_ONE), "--of", "tightspan"])
    assert code == 1
    assert out["error"]["code"] == "DimensionTooHigh"


def test_realize_path(files, capsys):
    tmp_path, write = files
    dot = tmp_path / "r.dot"
    code, out = run(
        capsys, ["realize", "path", write("m.json", ONE_WAY), "--dot", str(dot)]
    )
    assert code == 0
    assert out["evaluates_back"] is True
    assert out["terminals"] == ["s", "t"]
    assert dot.read_text().startswith("digraph")
    code, out = run(capsys, ["realize", "path", write("m2.json", ALL_ONE)])
    assert code == 1
    assert out["error"]["code"] == "DimensionTooHigh"


def test_retract_and_membership(files, capsys):
    _, write = files
    mpath = write("m.json", ALL_ONE)
    ppath = write(
        "p.json",
        {
            "col": {"x0": "2", "x1": "2", "x2": "2"},
            "row": {"x0": "2", "x1": "2", "x2": "2"},
        },
    )
    code, out = run(capsys, ["retract", mpath, ppath])
    assert code == 0
    assert out["membership"] in ("T_not_Qplus", "Qplus")
    code, out = run(capsys, ["retract", mpath, ppath, "--target", "section"])
    assert code == 0
    assert out["membership"] == "Qplus"
    assert "0" in out["row"].values()


def test_geodesic(files, capsys):
    _, write = files
    mpath = write("m.json", ALL_ONE)
    p = write(
        "p.json",
        {
            "col": {"x0": "0", "x1": "1", "x2": "1"},
            "row": {"x0": "0", "x1": "1", "x2": "1"},
        },
    )
    q = write(
        "q.json",
        {
            "col": {"x0": "1", "x1": "1", "x2": "1"},
            "row": {"x0": "0", "x1": "0", "x2": "0"},
        },
    )
    code, out = run(capsys, ["geodesic", mpath, p, q, "--k", "4"])
    assert code == 0
    assert len(out["points"]) == 5
    assert out["total_length"] == out["dinf"] == "1"


def test_flow_commands(files, capsys):
    _, write = files
    npath = write("net.json", TRIANGLE_NET)
    mpath = write("mu.json", ONE_WAY)
    code, out = run(capsys, ["flow", "max", npath, mpath])
    assert code == 0
    assert out["value"] == "1"
    code, out = run(capsys, ["flow", "dual", npath, mpath])
    assert code == 0
    assert out["value"] == "1"
    code, out = run(capsys, ["flow", "verify", npath, mpath, "--mode", "Q"])
    assert code == 0
    assert out["max"] == "1" and out["min"] == "1" and out["equal"] is True
    assert out["cycles"] == [["s", "x", "t"]]


def test_usage_error_exit_code(files, capsys):
    _, write = files
    npath = write("net.json", {
        "vertices": ["s", "t"],
        "edges": [{"tail": "s", "head": "t", "cap": 3}],
        "terminals": ["s", "t"],
    })
    mpath = write("mu.json", ONE_WAY)
    # mode Q on an unbalanced network is a domain failure, not a usage one
    code, out = run(capsys, ["flow", "verify", npath, mpath, "--mode", "Q"])
    assert code == 1 and out["error"]["code"] == "NotEulerian"


def test_decompose(files, capsys):
    _, write = files
    rpath = write(
        "r.json",
        {
            "vertices": ["u0", "u1"],
            "edges": [{"tail": "u0", "head": "u1", "length": "1"}],
            "terminals": ["a", "b"],
            "subtrees": {"a": ["u0"], "b": ["u1"]},
        },
    )
    code, out = run(capsys, ["decompose", rpath])
    assert code == 0
    assert out["recombines"] is True and out["compatible"] is True
    assert out["terms"] == [{"side_a": ["a"], "side_b": ["b"], "coeff": "1"}]


def test_out_file_and_determinism(files, capsys):
    tmp_path, write = files
    mpath = write("m.json", ALL_ONE)
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert main(["tightspan", mpath, "--out", str(out1)]) == 0
    assert main(["tightspan", mpath, "--out", str(out2)]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()
    assert json.loads(out1.read_text())["which"] == "T"


def test_missing_file_is_parse_error(capsys):
    code, out = run(capsys, ["validate", "/nonexistent/m.json"])
    assert code == 1
    assert out["error"]["code"] == "InputParseError"

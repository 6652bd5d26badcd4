import json

import pytest
from click.testing import CliRunner

from kgraph.cli import main, run
from kgraph.utils.io import action_to_dict, skeleton_to_dict


@pytest.fixture
def runner():
    return CliRunner()


def _invoke(runner, *args):
    return runner.invoke(main, [str(arg) for arg in args])


def _json(result):
    return json.loads(result.stdout)


def test_validate(runner, o2_files):
    skeleton_path, action_path = o2_files
    result = _invoke(runner, "validate", skeleton_path)
    assert result.exit_code == 0
    assert _json(result)["ok"] is True
    result = _invoke(runner, "validate", skeleton_path, action_path)
    assert result.exit_code == 0


def test_validate_text(runner, o2_files):
    result = _invoke(runner, "--format", "text", "validate", o2_files[0])
    assert result.exit_code == 0
    assert result.stdout.splitlines()[0] == "ok: true"


def test_invalid_skeleton(runner, tmp_path):
    path = tmp_path / "dangling.json"
    content = {
        "k": 1,
        "vertices": ["v"],
        "edges": [{"id": "e", "color": 1, "range": "v", "source": "w"}],
        "squares": [],
    }
    path.write_text(json.dumps(content), encoding="utf-8")
    result = _invoke(runner, "validate", path)
    assert result.exit_code == 1
    assert _json(result)["violations"][0]["kind"] == "DanglingEdge"
    result = _invoke(runner, "paths", path, "-v", "v", "-n", "1")
    assert result.exit_code == 1


def test_bad_input(runner, tmp_path, o2_files):
    result = _invoke(runner, "validate", tmp_path / "missing.json")
    assert result.exit_code == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    assert _invoke(runner, "validate", broken).exit_code == 2
    assert _invoke(runner, "paths", o2_files[0], "-v", "v", "-n", "1,1").exit_code == 2


def test_bad_config(runner, tmp_path, o2_files):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"searchDepth": 4}), encoding="utf-8")
    result = _invoke(runner, "--config", config, "validate", o2_files[0])
    assert result.exit_code == 2


def test_paths(runner, o2_files):
    result = _invoke(runner, "paths", o2_files[0], "-v", "v", "-n", "2")
    assert result.exit_code == 0
    assert sorted(tuple(p["word"]) for p in _json(result)) == [
        ("f1", "f1"),
        ("f1", "f2"),
        ("f2", "f1"),
        ("f2", "f2"),
    ]


def test_mce(runner, o2_files):
    result = _invoke(runner, "mce", o2_files[0], "-a", "f1", "-b", "f1,f2")
    assert result.exit_code == 0
    (pair,) = _json(result)
    assert pair["extension"]["word"] == ["f1", "f2"]
    assert pair["xi"] == ["f2"]
    assert pair["eta"] == []
    result = _invoke(runner, "--format", "text", "mce", o2_files[0], "-a", "f1", "-b", "f2")
    assert result.stdout.strip() == "(none)"


def test_ktheory(runner, o2_files):
    result = _invoke(runner, "ktheory", *o2_files, "--method", "both")
    assert result.exit_code == 0
    content = _json(result)
    assert content["K0"] == {"rank": 0, "torsion": []}
    assert content["K1"] == {"rank": 0, "torsion": []}
    assert content["method"] == "both-agree"


def test_ktheory_inapplicable(runner, tmp_path, cycle3):
    skeleton_path = tmp_path / "cycle.json"
    action_path = tmp_path / "rotation.json"
    skeleton_path.write_text(json.dumps(skeleton_to_dict(cycle3.skeleton)), encoding="utf-8")
    action_path.write_text(json.dumps(action_to_dict(cycle3.action)), encoding="utf-8")
    result = _invoke(runner, "ktheory", skeleton_path, action_path)
    assert result.exit_code == 1
    result = _invoke(runner, "--format", "text", "ktheory", skeleton_path)
    assert result.exit_code == 0
    assert result.stdout.splitlines()[:2] == ["K0 = Z", "K1 = Z"]


def test_takai(runner, o2_files):
    result = _invoke(runner, "takai", *o2_files, "--window", "2")
    assert result.exit_code == 0
    assert _json(result)["ok"] is True


def test_simplicity(runner, o2_files):
    bounds = ("--depth", "4", "--pair-bound", "2")
    result = _invoke(runner, "simplicity", *o2_files, *bounds)
    assert result.exit_code == 1
    content = _json(result)
    assert content["verdict"] == "NotSimple"
    assert content["crossed_graph_agrees"] is True
    result = _invoke(runner, "simplicity", o2_files[0], *bounds)
    assert result.exit_code == 0
    assert _json(result)["verdict"] == "Simple"


def test_crossprod_recognize_and_skew(runner, tmp_path, o2_files):
    product = tmp_path / "product.json"
    result = _invoke(runner, "crossprod", *o2_files, "--out", product, "--mce-bound", "1")
    assert result.exit_code == 0
    assert _json(result)["mce_check"]["ok"] is True
    assert json.loads(product.read_text(encoding="utf-8"))["k"] == 2

    base = tmp_path / "base.json"
    action = tmp_path / "action.json"
    result = _invoke(
        runner, "recognize", product, "--zl-colors", "2", "--out", base, "--action-out", action
    )
    assert result.exit_code == 0
    assert _invoke(runner, "validate", base, action).exit_code == 0
    assert _invoke(runner, "recognize", product, "--zl-colors", "1").exit_code == 1

    cocycle = tmp_path / "cocycle.json"
    values = {"f1": [0], "f2": [0], "(v,e1)": [-1]}
    cocycle.write_text(json.dumps({"values": values}), encoding="utf-8")
    result = _invoke(runner, "skew", product, cocycle, "--window", "1")
    assert result.exit_code == 0
    assert len(_json(result)["vertices"]) == 3


def test_gallery(runner, tmp_path):
    skeleton_path = tmp_path / "loops.json"
    action_path = tmp_path / "rotation.json"
    result = _invoke(
        runner, "gallery", "m_loops", "3", "--out", skeleton_path, "--action-out", action_path
    )
    assert result.exit_code == 0
    assert _json(result)["name"] == "m_loops(3)"
    assert _invoke(runner, "validate", skeleton_path, action_path).exit_code == 0

    result = _invoke(runner, "gallery", "rank2_bratteli", "1,1,1", "2")
    assert result.exit_code == 0
    assert len(_json(result)["skeleton"]["vertices"]) == 6
    assert _invoke(runner, "gallery", "petersen").exit_code == 2
    assert _invoke(runner, "gallery", "m_loops", "x").exit_code == 2


def test_run(o2_files, tmp_path, capsys):
    assert run(["validate", o2_files[0]]) == 0
    assert json.loads(capsys.readouterr().out)["ok"] is True
    assert run(["validate", str(tmp_path / "missing.json")]) == 2

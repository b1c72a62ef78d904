import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from mgrack import corpus
from mgrack.cli import main
from mgrack.finite_group import s3_presented


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    (tmp_path / "s3.json").write_text(json.dumps(s3_presented().to_dict()))
    for name in ("circle", "theta", "curl_pos"):
        shutil.copy(corpus.BUNDLED / "diagrams" / f"{name}.json", tmp_path / f"{name}.json")
    shutil.copy(corpus.BUNDLED / "sums" / "sum_curls.json", tmp_path / "sum.json")
    return tmp_path


def test_verify_group(capsys, files):
    code, out, _ = run(capsys, "verify", "--structure", files / "s3.json")
    assert code == 0
    assert json.loads(out) == {"kind": "group", "ok": True}


def test_verify_broken_group(capsys, files):
    data = s3_presented().to_dict()
    data["table"][1][1] = 0
    (files / "bad.json").write_text(json.dumps(data))
    code, out, err = run(capsys, "verify", "--structure", files / "bad.json")
    assert code == 3
    assert json.loads(out)["ok"] is False
    assert err


def test_build_pipeline(capsys, files):
    z, m = files / "z.json", files / "m.json"
    assert run(capsys, "build", "gfamily", "--example", "z3s3", "--out", z)[0] == 0
    code, out, _ = run(capsys, "build", "semidirect", "--gfamily", z, "--normal", "full", "--out", m)
    assert code == 0 and json.loads(out)["elements"] == 108
    code, out, _ = run(capsys, "verify", "--structure", m)
    report = json.loads(out)
    assert code == 0 and report["ok"] and report["elements"] == 108 and report["components"] == [36, 36, 36]
    code, out, _ = run(capsys, "count", "--diagram", files / "circle.json", "--structure", m)
    assert code == 0 and json.loads(out)["count"] == 108
    code, out, _ = run(capsys, "star", "--diagram", files / "sum.json", "--structure", m)
    assert code == 0 and json.loads(out)["witness"]["alpha"]["label"] == "(0,(a2,a))"

    a = files / "a.json"
    assert run(capsys, "build", "assoc", "--gfamily", z, "--out", a)[0] == 0
    code, out, _ = run(capsys, "star", "--diagram", files / "sum.json", "--structure", a)
    assert code == 1 and json.loads(out) == {"holds": False, "marked_arc": "alpha", "witness": None}

    code, out, _ = run(capsys, "build", "semidirect", "--gfamily", z, "--normal", "0,1,2")
    assert code == 0 and len(json.loads(out)["star"]) == 54
    code, _, err = run(capsys, "build", "semidirect", "--gfamily", z, "--normal", "0,3")
    assert code == 2 and "normal" in err


def test_build_group_and_rack_family(capsys, files):
    code, out, _ = run(capsys, "build", "group", "--cyclic", 4)
    assert code == 0 and json.loads(out)["order"] == 4
    (files / "r.json").write_text(json.dumps({"size": 3, "op": [[0, 2, 1], [2, 1, 0], [1, 0, 2]]}))
    code, out, _ = run(capsys, "build", "gfamily", "--rack", files / "r.json")
    assert code == 0 and json.loads(out)["group"]["order"] == 2


def test_abelian_extension(capsys, files):
    (files / "swap.json").write_text(json.dumps({"size": 2, "op": [[1, 1], [0, 0]]}))
    run(capsys, "build", "gfamily", "--rack", files / "swap.json", "--out", files / "f.json")
    run(capsys, "build", "assoc", "--gfamily", files / "f.json", "--out", files / "m.json")
    z2 = {"order": 2, "table": [[0, 1], [1, 0]], "identity": 0}
    good = {"target": z2, "f_rack": np.zeros((4, 4), int).tolist(), "f_group": [[[0, 0], [0, 1]], [[0, 0], [0, 1]]]}
    (files / "c.json").write_text(json.dumps(good))
    code, out, _ = run(capsys, "build", "abelext", "--structure", files / "m.json", "--cocycle", files / "c.json")
    assert code == 0 and len(json.loads(out)["star"]) == 8
    bad = dict(good, f_rack=np.eye(4, dtype=int).tolist(), f_group=[[[0, 0], [0, 0]]] * 2)
    (files / "c.json").write_text(json.dumps(bad))
    code, out, _ = run(capsys, "build", "abelext", "--structure", files / "m.json", "--cocycle", files / "c.json")
    assert code == 3 and json.loads(out)["ok"] is False


def test_move(capsys, files):
    out_path = files / "twist.json"
    code, out, _ = run(capsys, "move", "--diagram", files / "theta.json", "--move",
                       '{"move": "R2_ADD", "site": {"over": "a", "under": "b"}, "variant": "-"}', "--out", out_path)
    assert code == 0 and json.loads(out)["crossings"] == 2
    code, out, _ = run(capsys, "verify", "--structure", out_path)
    assert code == 0 and json.loads(out)["kind"] == "diagram"
    code, _, err = run(capsys, "move", "--diagram", files / "theta.json", "--move",
                       '{"move": "R2_REMOVE", "site": {"arc": "a"}}')
    assert code == 2 and "R2_REMOVE" in err


@pytest.mark.parametrize("argv", [
    ["count", "--diagram", "circle.json", "--structure", "s3.json", "--bogus"],
    ["frobnicate"],
    [],
    ["count", "--diagram", "missing.json", "--structure", "s3.json"],
    ["count", "--diagram", "circle.json", "--structure", "s3.json"],
    ["count", "--diagram", "circle.json", "--structure", "s3.json", "--jobs", "0"],
])
def test_usage_errors(capsys, files, argv):
    argv = [str(files / a) if a.endswith(".json") else a for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_unparseable_json(capsys, files):
    (files / "junk.json").write_text("{nope")
    code, _, err = run(capsys, "verify", "--structure", files / "junk.json")
    assert code == 2 and "JSON" in err


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    data = json.loads(out)
    assert code == 0 and set(data["schemas"]) >= {"group", "rack", "gfamily", "mgr", "diagram", "cocycle"}


def test_suite_bundled(capsys):
    code, out, _ = run(capsys, "suite")
    report = json.loads(out)
    assert code == 0 and report["ok"] and report["fixtures"] >= 45


def test_suite_corrupted(capsys, tmp_path):
    root = tmp_path / "corpus"
    shutil.copytree(corpus.BUNDLED, root)
    target = root / "pairs" / "r5_over_merge_pos.json"
    data = json.loads(target.read_text())
    data["after"]["crossings"][0]["sign"] *= -1
    target.write_text(json.dumps(data))
    code, out, err = run(capsys, "suite", root)
    report = json.loads(out)
    assert code == 3
    assert [f["fixture"] for f in report["failures"]] == ["pairs/r5_over_merge_pos.json"]
    assert "r5_over_merge_pos" in err


def test_suite_empty(capsys, tmp_path):
    code, out, _ = run(capsys, "suite", tmp_path)
    assert code == 2 and json.loads(out)["ok"] is False


def test_console_stdout_is_stable(files):
    argv = [sys.executable, "-m", "mgrack.cli", "count", "--diagram", str(files / "theta.json"),
            "--structure", str(files / "s3.json")]
    # s3.json is a group, so build an MGR first
    subprocess.run([sys.executable, "-m", "mgrack.cli", "build", "gfamily", "--example", "z3s3", "--out",
                    str(files / "z.json")], check=True, capture_output=True)
    subprocess.run([sys.executable, "-m", "mgrack.cli", "build", "semidirect", "--gfamily", str(files / "z.json"),
                    "--out", str(files / "m.json")], check=True, capture_output=True)
    argv[-1] = str(files / "m.json")
    outs = [subprocess.run(argv + extra, check=True, capture_output=True).stdout for extra in ([], [], ["--jobs", "2"])]
    assert outs[0] == outs[1] == outs[2]
    assert json.loads(outs[0])["count"] == 3888

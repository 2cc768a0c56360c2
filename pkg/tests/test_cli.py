import json
import subprocess
import sys

import pytest

from atomspec.cli import main
from atomspec.quiver import Loop, Tilde, expr_to_json, point
from atomspec.series import ColorId, Series, series_to_json


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


CHAIN2 = {"elements": ["a", "b"], "hasse": [["a", "b"]]}
CHAIN3 = {"elements": ["a", "b", "c"], "hasse": [["a", "b"], ["b", "c"]]}
VEE = {"elements": ["p", "q", "r"], "hasse": [["p", "q"], ["p", "r"]]}
RAY = Tilde(point("v"), "t")


def test_realize_two_chain(tmp_path, capsys):
    code, out, _ = run(["realize", write(tmp_path, "p.json", CHAIN2)], capsys)
    assert code == 0
    data = json.loads(out)
    assert len(data["quiver"]["sum"]) == 2
    assert data["spectrum"]["leq"] == [["a", "a"], ["a", "b"], ["b", "b"]]


def test_realize_singleton_to_dir(tmp_path, capsys):
    out_dir = tmp_path / "out"
    code, out, _ = run(["realize", write(tmp_path, "p.json", {"elements": ["a"], "hasse": []}),
                        "--out", str(out_dir)], capsys)
    assert code == 0 and out == ""
    quiver = json.loads((out_dir / "quiver.json").read_text())
    assert quiver == {"sum": [["a", {"loop": "a"}]]}
    assert json.loads((out_dir / "spectrum.json").read_text())["spectrum"]["elements"] == ["a"]


def test_invalid_inputs_exit_2(tmp_path, capsys):
    assert run(["realize", write(tmp_path, "e.json", {"elements": [], "hasse": []})], capsys)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(["realize", str(bad)], capsys)
    assert code == 2 and "not valid JSON" in err
    cyc = {"elements": ["a", "b"], "hasse": [["a", "b"], ["b", "a"]]}
    assert run(["realize", write(tmp_path, "c.json", cyc)], capsys)[0] == 2
    assert run(["realize", str(tmp_path / "missing.json")], capsys)[0] == 2


def test_check_budget_inconsistent(tmp_path, capsys):
    path = write(tmp_path, "p.json", CHAIN2)
    assert run(["check", path, "--budget", "3"], capsys)[0] == 2


@pytest.mark.parametrize("poset", [CHAIN2, CHAIN3, VEE], ids=["2-chain", "3-chain", "vee"])
def test_check_passes(poset, tmp_path, capsys):
    code, out, _ = run(["check", write(tmp_path, "p.json", poset)], capsys)
    report = json.loads(out)
    assert code == 0 and report["pass"] is True
    assert "property evidence only" in report["noetherian"]
    assert report["cn_realizable"] is (poset is not CHAIN3)


def test_check_deterministic(tmp_path, capsys):
    path = write(tmp_path, "p.json", VEE)
    first = run(["check", path, "--seed", "3"], capsys)[1]
    second = run(["check", path, "--seed", "3"], capsys)[1]
    assert first == second


def test_cn_realizable(tmp_path, capsys):
    code, out, _ = run(["cn-realizable", write(tmp_path, "p.json", CHAIN3)], capsys)
    assert code == 0 and json.loads(out) == {"cn_realizable": False}


def test_mul_truncated(tmp_path, capsys):
    c = ColorId.named("c")
    f = write(tmp_path, "f.json", series_to_json(Series({(): 1, (c,): -1})))
    g = write(tmp_path, "g.json", series_to_json(Series({(): 1, (c,): 1, (c, c): 1})))
    code, out, _ = run(["mul", f, g, "--order", "2", "--text"], capsys)
    assert code == 0 and out == "1\n"
    code, out, _ = run(["mul", f, g], capsys)
    assert json.loads(out)["terms"][1]["num"] == -1


def test_act_loop(tmp_path, capsys):
    loop = Loop("p")
    q = write(tmp_path, "q.json", expr_to_json(loop))
    y = write(tmp_path, "y.json", {"terms": [{"vertex": "v", "num": 1}]})
    f = write(tmp_path, "f.json", series_to_json(Series.monomial([loop.color])))
    code, out, _ = run(["act", q, y, f], capsys)
    assert code == 0
    assert json.loads(out) == {"terms": [{"vertex": "v", "num": 1, "den": 1}]}


def test_act_budget_exit_3(tmp_path, capsys):
    c = ColorId.cross("t", ("v",), ("v",))
    q = write(tmp_path, "q.json", expr_to_json(RAY))
    y = write(tmp_path, "y.json", {"terms": [{"vertex": "v/@1/v", "num": 1}]})
    f = write(tmp_path, "f.json", series_to_json(Series.monomial([c] * 3)))
    code, _, err = run(["act", q, y, f, "--budget", "2", "--span-len", "1", "--depth", "0"],
                       capsys)
    assert code == 3 and "4" in err


def test_divide_ray(tmp_path, capsys):
    q = write(tmp_path, "q.json", expr_to_json(RAY))
    y = write(tmp_path, "y.json", {"terms": [{"vertex": "v/@0/v", "num": 1},
                                             {"vertex": "v/@1/v", "num": 1}]})
    z = write(tmp_path, "z.json", {"terms": [{"vertex": "v/@1/v", "num": 1}]})
    code, out, _ = run(["divide", q, y, z, "--depth", "3", "--text"], capsys)
    assert code == 0
    assert out.count("c[t](v,v)") == 6 and out.count(" - ") == 1
    code, out, _ = run(["divide", q, y, z, "--depth", "3"], capsys)
    data = json.loads(out)
    assert [t["num"] for t in data["quotient"]["terms"]] == [1, -1, 1]
    assert data["residual"]["terms"] == [{"vertex": "v/@4/v", "num": -1, "den": 1}]


def test_dot(tmp_path, capsys):
    q = write(tmp_path, "q.json", expr_to_json(Loop("p")))
    code, out, _ = run(["dot", q, "--budget", "0", "--span-len", "0", "--depth", "0"], capsys)
    assert code == 0 and out.count("->") == 1


def test_console_entry_point(tmp_path):
    path = write(tmp_path, "p.json", CHAIN3)
    proc = subprocess.run([sys.executable, "-m", "atomspec.cli", "cn-realizable", path],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and '"cn_realizable": false' in proc.stdout


def test_check_failure_exit_1(tmp_path, capsys, monkeypatch):
    import atomspec.cli as cli
    monkeypatch.setattr(cli, "run_check", lambda P, cfg: {"pass": False})
    code, out, _ = run(["check", write(tmp_path, "p.json", CHAIN2)], capsys)
    assert code == 1 and json.loads(out) == {"pass": False}

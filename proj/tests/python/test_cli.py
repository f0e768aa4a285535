import json
import os
import subprocess

import pytest

CLI = os.environ.get("SOLITON_CLI")
pytestmark = pytest.mark.skipif(not CLI, reason="SOLITON_CLI not set")


def run(*args, env=None, stdin=None):
    full_env = dict(os.environ)
    full_env.pop("SOLITON_VOLUME_PRECISION", None)
    full_env.update(env or {})
    return subprocess.run([CLI, *args], capture_output=True, text=True, env=full_env, input=stdin)


def report(*args, **kw):
    proc = run(*args, **kw)
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


def error(proc):
    return json.loads(proc.stderr)["error"]


def test_eval_json():
    r = report("volume", "eval", "--builtin", "OkPn:2:1", "--zeta", "1,2")
    assert r["schema_version"] == "1"
    assert r["command"] == "volume eval"
    assert r["results"]["value"]["precision"] == "f64"
    assert r["inputs"]["options"]["zeta"] == ["1", "2"]


def test_minimize_blowup():
    r = report("volume", "minimize", "--builtin", "OkPn:2:1")
    z = [float(v) for v in r["results"]["zeta_star"]["value"]]
    assert z == pytest.approx([2**0.5, 2**0.5], rel=1e-12)


def test_environment_precision():
    r = report("volume", "minimize", "--builtin", "Cn:2", env={"SOLITON_VOLUME_PRECISION": "extended"})
    assert r["inputs"]["options"]["precision"] == "extended"
    assert r["results"]["value"]["precision"] == "extended"
    # The flag wins over the environment.
    r = report("volume", "minimize", "--builtin", "Cn:2", "--precision", "f64",
               env={"SOLITON_VOLUME_PRECISION": "extended"})
    assert r["inputs"]["options"]["precision"] == "f64"


def test_bad_environment_precision():
    proc = run("volume", "eval", "--builtin", "Cn:2", "--zeta", "1,1", env={"SOLITON_VOLUME_PRECISION": "quad"})
    assert proc.returncode == 2


def test_table_output():
    proc = run("volume", "minimize", "--builtin", "Cn:3", "--table")
    assert proc.returncode == 0
    assert proc.stdout.startswith("volume minimize\n")
    assert "zeta_star:" in proc.stdout
    assert not proc.stdout.lstrip().startswith("{")


def test_json_and_table_exclusive():
    assert run("models", "--json", "--table").returncode == 2


def test_restrict_direction():
    r = report("volume", "restrict", "--builtin", "OkPn:3:1", "--direction", "1,1,1")
    assert r["inputs"]["options"]["direction"] == ["1", "1", "1"]
    t = float(r["results"]["critical_root"]["value"])
    assert t == pytest.approx(1.5674683748, rel=1e-9)


def test_oracle_flag():
    r = report("volume", "eval", "--builtin", "OkPn:3:2", "--zeta", "1,2,3", "--oracle")
    assert r["inputs"]["options"]["oracle"] is True
    assert "oracle" in r["diagnostics"] or "oracle" in r["results"]


def test_validation_exit():
    proc = run("volume", "eval", "--builtin", "OkPn:2:1", "--zeta", "1,2,3")
    assert proc.returncode == 2
    assert error(proc)["kind"] == "validation"
    assert run("volume", "eval", "--builtin", "Nope:2", "--zeta", "1").returncode == 2
    assert run("surface", "hj").returncode == 2


def test_infeasible_exit():
    proc = run("volume", "eval", "--builtin", "Cn:2", "--zeta", "0,1")
    assert proc.returncode == 4
    assert error(proc)["kind"] == "infeasible"


def test_models():
    assert report("models")["command"] == "models"


def test_non_convergence_exit(tmp_path):
    problem = report("volume", "eval", "--builtin", "OkPn:3:1", "--zeta", "1,1,1")["inputs"]["document"]
    problem["solver"] = {"max_iter": 1}
    path = tmp_path / "p.json"
    path.write_text(json.dumps(problem))
    proc = run("volume", "minimize", str(path), "--tol", "1e-15")
    assert proc.returncode == 3
    err = error(proc)
    assert err["kind"] == "non_convergence"
    assert len(err["best_iterate"]["value"]) == 3


def test_stdin_document():
    problem = report("volume", "eval", "--builtin", "Cn:2", "--zeta", "1,1")["inputs"]["document"]
    r = report("volume", "minimize", "-", stdin=json.dumps(problem))
    assert r["inputs"]["document"] == problem


def test_reports_reproduce_bit_identically(tmp_path):
    out = tmp_path / "r.json"
    proc = run("volume", "minimize", "--builtin", "OkPn:4:2", "-o", str(out))
    assert proc.returncode == 0
    first = out.read_text()
    r = json.loads(first)
    doc = tmp_path / "doc.json"
    doc.write_text(json.dumps(r["inputs"]["document"]))
    opts = r["inputs"]["options"]
    again = run("volume", "minimize", str(doc), "--precision", opts["precision"])
    assert again.returncode == 0
    assert again.stdout == first

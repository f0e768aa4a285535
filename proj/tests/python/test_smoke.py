import pytest

import soliton_volume as sv


def test_commands():
    names = sv.commands()
    assert "volume minimize" in names
    assert "surface hj" in names
    assert sv.SCHEMA_VERSION == "1"


def test_minimize_and_reproduce():
    r = sv.run("volume minimize", sv.builtin("OkPn:2:1"), precision="f64")
    sv.validate_report(r)
    z = [float(v) for v in r["results"]["zeta_star"]["value"]]
    assert z == pytest.approx([2**0.5, 2**0.5], rel=1e-12)
    assert sv.reproduce(r) == r


def test_extended_precision():
    r = sv.run("volume minimize", sv.builtin("Cn:3"), precision="extended")
    assert r["results"]["value"]["precision"] == "extended"


def test_surface_hj():
    r = sv.run("surface hj", {"schema_version": "1", "kind": "cyclic_quotient", "payload": {"p": 8, "q": 3}})
    assert r["results"]["coefficients"] == [3, 3]


def test_errors_map_to_kinds():
    with pytest.raises(sv.ValidationError) as e:
        sv.builtin("Nope:3")
    assert e.value.exit_code == 2
    with pytest.raises(sv.InfeasibleError):
        sv.run("volume eval", sv.builtin("Cn:2"), zeta=["0", "1"])
    doc = sv.builtin("OkPn:3:1")
    doc["solver"] = {"max_iter": 1}
    with pytest.raises(sv.NonConvergenceError) as e:
        sv.run("volume minimize", doc, tol="1e-15")
    assert len(e.value.best_iterate["value"]) == 3


def test_validate_report_rejects_garbage():
    with pytest.raises(sv.ValidationError):
        sv.validate_report({"schema_version": "1"})

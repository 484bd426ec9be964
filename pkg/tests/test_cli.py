import json
from fractions import Fraction

import pytest

from tau2pf import cli, spectral
from tau2pf.checks import REGISTRY, CheckResult
from tau2pf.cli import RunConfig, main, seeded_rapidities
from tau2pf.errors import CapacityError, ConfigError

HAND = {"N": 2, "L": 1, "rapidities": [[0, 1, 0, 2], [0, 1, 0, 3]],
        "suites": ["core", "parafermion"]}


def write(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_seeded_generator_is_deterministic():
    a = seeded_rapidities(0, 5, 2, 2)
    b = seeded_rapidities(0, 5, 2, 2)
    assert a.points == b.points
    assert len(a.points) == 4
    pts = cli._seeded_points(0, 5, 5, 4)
    assert pts == cli._seeded_points(0, 5, 5, 4)
    flat = [x for p in pts for x in p]
    assert len(flat) == 16
    assert all(isinstance(x, Fraction) and x != 0 for x in flat)
    assert all(x.denominator <= 5 and abs(x) <= 5 for x in flat)
    assert seeded_rapidities(1, 5, 2, 2).points != a.points


@pytest.mark.parametrize("raw,field", [
    ({"N": 2, "L": 0}, "L"),
    ({"N": 1, "L": 2}, "N"),
    ({"L": 2}, "N"),
    ({"N": 2, "L": 1, "backend": "gpu"}, "backend"),
    ({"N": 2, "L": 1, "suites": ["nope"]}, "suites"),
    ({"N": 2, "L": 1, "tolerances": {"float_residual": -1}}, "tolerances.float_residual"),
    ({"N": 2, "L": 1, "rapidities": [[0, 1, 0, 2]]}, "rapidities"),
    ({"N": 2, "L": 1, "rapidities": [[0, 1, 0, 2], [0, 0, 1, 1]]}, "rapidities[1]"),
    ({"N": 2, "L": 1, "rapidities": [[0, 1, 0, 2], [0, "x", 1, 1]]}, "rapidities[1]"),
    ({"N": 2, "L": 1, "colour": 3}, "colour"),
])
def test_config_errors_name_the_field(raw, field):
    with pytest.raises(ConfigError) as exc:
        RunConfig.from_dict(raw)
    assert exc.value.field == field


def test_dimension_cap():
    with pytest.raises(CapacityError):
        RunConfig.from_dict({"N": 4, "L": 6})
    cfg = RunConfig.from_dict({"N": 2, "L": 3}, dim_cap=8)
    assert cfg.dim_cap == 8
    with pytest.raises(CapacityError):
        RunConfig.from_dict({"N": 2, "L": 4}, dim_cap=8)


def test_fendley_limit_rapidities():
    cfg = RunConfig.from_dict({"N": 2, "L": 1, "rapidities": {
        "fendley_limit": {"c": [1, "1/2"], "d": [2, 3]}}})
    assert cfg.points[1] == (0, 1, Fraction(1, 2), 3)
    cfg = RunConfig.from_dict({"N": 2, "L": 2, "rapidities": {
        "fendley_limit": {"random_rational": {"seed": 3}}}})
    assert all(p[0] == 0 and p[1] == 1 for p in cfg.points)


def test_hand_report(tmp_path, capsys):
    out = tmp_path / "rep.json"
    assert main(["run", write(tmp_path, HAND), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["suites"]["parafermion"]["extras"]["s"] == ["1", "-36"]
    assert rep["suites"]["parafermion"]["extras"]["truncation_max_residual"] == 0
    assert rep["summary"]["status"] == "pass"
    for suite in rep["suites"].values():
        for r in suite["results"]:
            assert r["paper_eq_tag"] == REGISTRY[r["name"]][0]
    assert "passed" in capsys.readouterr().err


def test_float_backend_override(tmp_path):
    out = tmp_path / "rep.json"
    assert main(["run", write(tmp_path, HAND), "--backend", "float", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["config"]["backend"] == "float"
    assert rep["suites"]["parafermion"]["extras"]["s"][1] == pytest.approx([-36.0, 0.0])


def test_batch_with_jobs(tmp_path):
    out = tmp_path / "rep.json"
    cfg = write(tmp_path, [HAND, dict(HAND, N=3, rapidities={"random_rational": {"seed": 2}})])
    assert main(["run", cfg, "--jobs", "2", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["summary"] == {"runs": 2, "failed_runs": 0}


def test_usage_errors(tmp_path, capsys):
    assert main(["frobnicate"]) == 2
    assert main(["run", write(tmp_path, {"N": 2, "L": 0})]) == 2
    assert "L" in capsys.readouterr().err
    assert main(["run", write(tmp_path, HAND), "--suite", "bogus"]) == 2
    assert main(["run", str(tmp_path / "missing.json")]) == 2


def test_schema_and_registry(capsys):
    assert main(["schema"]) == 0
    schema = json.loads(capsys.readouterr().out)
    assert schema["required"] == ["N", "L"]
    assert main(["registry"]) == 0
    reg = json.loads(capsys.readouterr().out)
    assert set(reg) == set(REGISTRY)
    for name, entry in reg.items():
        assert isinstance(entry["paper_eq_tag"], str) and entry["paper_eq_tag"]
        assert entry["kind"] in ("identity", "conjecture", "error")


def test_conjecture_never_gates(tmp_path, monkeypatch):
    def failing(rap, spec, tol=1e-8):
        return [CheckResult("b54", False, 1.0, {}, "forced")]
    monkeypatch.setattr(spectral, "b54_check", failing)
    out = tmp_path / "rep.json"
    cfg = {"N": 2, "L": 2, "suites": ["spectral"]}
    assert main(["run", write(tmp_path, cfg), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["summary"]["conjecture_failed"] == 1
    assert rep["summary"]["failed"] == 0


def test_identity_failure_sets_exit_status(tmp_path, monkeypatch):
    def failing(rap, tol=1e-8):
        return [CheckResult("A0_scalar", False, 1.0, {}, "forced")]
    monkeypatch.setattr(cli, "core_checks", failing)
    cfg = write(tmp_path, dict(HAND, suites=["core"]))
    assert main(["run", cfg, "--out", str(tmp_path / "r.json")]) == 1


def test_library_error_becomes_suite_error():
    # coincident roots: every site identical with c = 0 gives a degenerate spectrum
    cfg = RunConfig.from_dict({"N": 2, "L": 2, "suites": ["spectral"],
                               "rapidities": [[0, 1, 0, 1]] * 4})
    rep = cli.run(cfg)
    names = [r["name"] for r in rep["suites"]["spectral"]["results"]]
    assert names == ["suite_error"]
    assert rep["summary"]["status"] == "fail"


def test_report_round_trips(tmp_path):
    cfg = RunConfig.from_dict(dict(HAND, suites=["core"]))
    rep = cli.run(cfg)
    assert json.loads(json.dumps(rep)) == rep

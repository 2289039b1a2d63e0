import csv
import json
from fractions import Fraction

import pytest

from polyhom import cli
from polyhom.config import ConfigError, RunConfig, parse_config, parse_matrix
from polyhom.hulls import b_arc
from polyhom.reports import run_counterexample

FAST = "t_samples = 0.5\ncert_N = 8\nN = 8\n"


def _run(tmp_path, cmd, text, *extra, name="out"):
    cfg = tmp_path / f"{name}.cfg"
    cfg.write_text(text, encoding="utf-8")
    out = tmp_path / name
    code = cli.main([cmd, "--config", str(cfg), "--out", str(out), *extra])
    return code, out


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_parse_config():
    cfg = parse_config("# comment\np = 4\nN = 16, 32\neps = 1/2 1/4\nA = arc:1/2\n")
    assert cfg.N == [16, 32] and cfg.eps == [Fraction(1, 2), Fraction(1, 4)]
    assert (cfg.matrix_A() == b_arc(0.5)).all()
    assert parse_matrix("1 0 0 2").tolist() == [[1, 0], [0, 2]]
    for bad in ("p = 1", "N = 7", "bogus = 1", "p = 4\np = 4", "eps = 0.3", "A = 1 2 3",
                "N", "A = arc:2", "threads = 1.5", "variant = other", "p = x"):
        with pytest.raises(ConfigError):
            parse_config(bad)
    assert RunConfig().validate().p == 4


def test_hulls_command(tmp_path):
    code, out = _run(tmp_path, "hulls", "")
    assert code == 0
    rows = {r["set"]: r["polyconvex"] for r in _rows(out / "hulls.csv")}
    assert rows == {"A1": "true", "A2": "true", "B": "false"}
    arc = _rows(out / "figure1_arc.csv")
    assert (float(arc[0]["b1"]), float(arc[0]["b2"])) == pytest.approx((1, 1))
    assert (float(arc[-1]["b1"]), float(arc[-1]["b2"])) == pytest.approx((0.5, 2))
    res = _rows(out / "arc_membership.csv")
    assert all(float(r["residual_affine"]) <= 1e-9 and float(r["residual_det"]) <= 1e-9 for r in res)
    summary = json.loads((out / "hulls_summary.json").read_text())
    assert summary["schema"] == "v1" and summary["expected"]


@pytest.mark.parametrize("variant", [[], ["--variant", "convex-phase2"]], ids=["default", "convex"])
def test_counterexample_command(tmp_path, variant):
    code, out = _run(tmp_path, "counterexample", FAST, *variant)
    assert code == 0
    s = json.loads((out / "counterexample_summary.json").read_text())
    assert s["reproduced"] and s["B_in_Ahom"]
    rows = {r["label"]: r["verdict"] for r in _rows(out / "counterexample.csv")}
    assert rows["arc(0.5)"] == "ExcludedBySverak"


def test_counterexample_not_reproduced_exit(monkeypatch):
    from polyhom.homogenize import membership
    from polyhom import reports

    def never(A, ce=None, strategy=(), opts=None, shift=None):
        return membership.MembershipVerdict(membership.Verdict.UNKNOWN)

    monkeypatch.setattr(reports, "membership_certify", never)
    rep = run_counterexample(RunConfig(t_samples=[0.5]).validate())
    assert rep.exit_code == 3 and not rep.summary["reproduced"]


def test_homogenize_command(tmp_path):
    code, out = _run(tmp_path, "homogenize", "A = 1 0 0 1\nN = 8\nk = 1 2\n")
    assert code == 0
    est = [float(r["estimate"]) for r in _rows(out / "homogenize.csv")]
    assert max(est) <= 1e-8
    code, out = _run(tmp_path, "homogenize", "A = 0 0 0 0\nN = 8\n", name="zero")
    assert code == 0 and float(_rows(out / "homogenize.csv")[0]["estimate"]) == 0.0
    code, out = _run(tmp_path, "homogenize", "A = arc:0.5\nN = 8\nk = 1 2\n", name="arc")
    est = [float(r["estimate"]) for r in _rows(out / "homogenize.csv")]
    assert code == 0 and est[1] <= est[0] and min(est) > 0.02


def test_homogenize_flag_exit(tmp_path):
    code, _ = _run(tmp_path, "homogenize", "A = arc:0.5\nN = 8\nmax_iter = 2\n")
    assert code == 3


def test_two_scale_command(tmp_path):
    code, out = _run(tmp_path, "two-scale", "eps = 1/2 1/4 1/8\n")
    assert code == 0
    rl = [float(r["error"]) for r in _rows(out / "riemann_lebesgue.csv")]
    assert rl == sorted(rl, reverse=True)
    sup = {r["field"]: r["pass"] for r in _rows(out / "support.csv")}
    assert sup == {"laminate_B1": "true", "corrupted_B1": "false"}


def test_outputs_byte_identical(tmp_path):
    for cmd, text in (("hulls", ""), ("two-scale", ""), ("homogenize", "A = arc:0.5\nN = 8\n"),
                      ("counterexample", FAST)):
        _, a = _run(tmp_path, cmd, text, name=f"{cmd}-a")
        _, b = _run(tmp_path, cmd, text, name=f"{cmd}-b")
        files = sorted(p.name for p in a.iterdir() if not p.name.endswith("_timing.csv"))
        assert files
        for name in files:
            assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_config_errors_exit_2(tmp_path, capsys):
    assert _run(tmp_path, "hulls", "p = 1\n")[0] == 2
    assert _run(tmp_path, "hulls", "\xff = \x00\n", name="junk")[0] == 2
    assert cli.main(["hulls", "--config", str(tmp_path / "missing.cfg")]) == 2
    assert cli.main(["hulls", "--threads", "0", "--out", str(tmp_path / "x")]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["nope"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["hulls", "--threads", "many"])
    assert exc.value.code == 2
    # grid that does not resolve the two-scale pattern surfaces as a config error
    assert _run(tmp_path, "two-scale", "field_N = 7\n", name="align")[0] == 2

"""Batch pipelines behind the command-line tool.

Each ``run_*`` function takes a :class:`RunConfig` and returns a
:class:`Report` of CSV tables plus a JSON summary.  Reports contain no
timings, so identical configurations give byte-identical files; wall times
go to a separate ``*_timing.csv``.
"""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import sets
from .config import RunConfig
from .energies import LAMINATE_PARTITION, counterexample_cell_energy
from .hulls import b_arc, is_polyconvex_set, pair_dets, pc_membership, simplex_scan
from .homogenize.cell import SolverOptions, cell_problem_minimize
from .homogenize.field import laminate_field
from .homogenize.membership import CertifyOptions, Verdict, membership_certify
from .homogenize.twoscale import (LambdaBins, corrupt_field, distance_fraction,
                                  empirical_two_scale_measure, riemann_lebesgue_check, support_check)

SCHEMA = "v1"
OK, CONFIG_ERROR, NOT_REPRODUCED = 0, 2, 3


@dataclass
class Report:
    command: str
    tables: dict = field(default_factory=dict)  # name -> (header, rows)
    summary: dict = field(default_factory=dict)
    exit_code: int = OK
    timings: list = field(default_factory=list)

    def write(self, out_dir) -> list:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for name, (header, rows) in self.tables.items():
            written.append(_write_csv(out / f"{name}.csv", header, rows))
        if self.timings:
            written.append(_write_csv(out / f"{self.command}_timing.csv", ["run", "wall_time_s"], self.timings))
        doc = {"schema": SCHEMA, "command": self.command, **self.summary}
        path = out / f"{self.command}_summary.json"
        path.write_text(json.dumps(_plain(doc), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        written.append(path)
        return written


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _write_csv(path: Path, header, rows) -> Path:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path


def _plain(v):
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, np.ndarray):
        return _plain(v.tolist())
    return v


def _sign(x: float) -> str:
    return "+" if x > 0 else "-" if x < 0 else "0"


def run_hulls(cfg: RunConfig) -> Report:
    rep = Report("hulls")
    rows, verdicts = [], {}
    for name, tr in (("A1", sets.A1), ("A2", sets.A2), ("B", sets.B)):
        d = pair_dets(tr)
        pcx = is_polyconvex_set(tr, cfg.hull_tol, cfg.scan_step)
        scan = simplex_scan(tr, cfg.scan_step, cfg.hull_tol)
        verdicts[name] = pcx
        rows.append([name, pcx, d[0, 1], d[0, 2], d[1, 2],
                     "".join(_sign(x) for x in (d[0, 1], d[0, 2], d[1, 2])), scan.n_extra, scan.sign_change])
    rep.tables["hulls"] = (["set", "polyconvex", "det_12", "det_13", "det_23", "signs", "scan_extra", "scan_sign_change"], rows)

    arc_rows, max_res = [], 0.0
    for t in cfg.t_samples:
        m = b_arc(t)
        cert = pc_membership(sets.B, m, cfg.hull_tol)
        if cert is None:
            arc_rows.append([t, m[0, 0], m[1, 1], False, "", "", "", "", ""])
            max_res = float("inf")
            continue
        max_res = max(max_res, cert.residual_affine, cert.residual_det)
        arc_rows.append([t, m[0, 0], m[1, 1], True, *cert.t, cert.residual_affine, cert.residual_det])
    rep.tables["arc_membership"] = (["t", "b1", "b2", "accepted", "t1", "t2", "t3", "residual_affine", "residual_det"], arc_rows)

    ts = np.linspace(0.0, 1.0, cfg.arc_points)
    rep.tables["figure1_arc"] = (["b1", "b2"], [[b_arc(t)[0, 0], b_arc(t)[1, 1]] for t in ts])
    pts = [(lbl, m) for s in (sets.A1, sets.A2, sets.B) for lbl, m in zip(s.labels, s.mats)]
    seen, prow = set(), []
    for lbl, m in pts:
        if lbl not in seen:
            seen.add(lbl)
            prow.append([lbl, m[0, 0], m[1, 1]])
    rep.tables["figure1_points"] = (["label", "a11", "a22"], prow)
    rep.summary = {"polyconvex": verdicts, "max_arc_residual": max_res,
                   "expected": verdicts == {"A1": True, "A2": True, "B": False}}
    return rep


def _verdict_row(label, A, v):
    ev = v.evidence
    return [label, A[0, 0], A[0, 1], A[1, 0], A[1, 1], v.tag.value, v.route,
            ev.get("energy", ""), ev.get("E11", ""), ev.get("detE", "")]


def run_counterexample(cfg: RunConfig) -> Report:
    rep = Report("counterexample")
    variant = None if cfg.variant == "default" else cfg.variant
    ce = counterexample_cell_energy(cfg.p, variant)
    opts = CertifyOptions(cfg.cert_N, cfg.cert_k, cfg.zero_tol,
                          SolverOptions(cfg.method, cfg.max_iter, cfg.gtol, threads=cfg.threads))
    rows, b_ok, excluded = [], True, 0
    for label, A in zip(sets.B.labels, sets.B.mats):
        v = membership_certify(A, ce, opts=opts)
        b_ok &= v.tag is Verdict.MEMBER
        rows.append(_verdict_row(label, A, v))
    for t in cfg.t_samples:
        A = b_arc(t)
        v = membership_certify(A, ce, opts=opts)
        excluded += v.tag is Verdict.EXCLUDED
        rows.append(_verdict_row(f"arc({t:g})", A, v))
    reproduced = bool(b_ok and excluded >= 1)
    rep.tables["counterexample"] = (["label", "a11", "a12", "a21", "a22", "verdict", "route",
                                     "energy", "E11", "detE"], rows)
    rep.summary = {"variant": cfg.variant, "p": cfg.p, "B_in_Ahom": b_ok, "arc_excluded": excluded,
                   "arc_samples": len(cfg.t_samples), "reproduced": reproduced}
    rep.exit_code = OK if reproduced else NOT_REPRODUCED
    return rep


def run_homogenize(cfg: RunConfig) -> Report:
    rep = Report("homogenize")
    variant = None if cfg.variant == "default" else cfg.variant
    ce = counterexample_cell_energy(cfg.p, variant)
    A = cfg.matrix_A()
    opts = SolverOptions(cfg.method, cfg.max_iter, cfg.gtol, threads=cfg.threads)
    rows, flagged = [], False
    for N in cfg.N:
        prev = None
        for k in sorted(cfg.k):
            init = None
            if prev is not None and k % prev.minimizer.k == 0:
                init = prev.minimizer.tiled(k // prev.minimizer.k)
            t0 = time.perf_counter()
            res = cell_problem_minimize(ce, A, N, k, opts, initial=init)
            rep.timings.append([f"N={N} k={k}", round(time.perf_counter() - t0, 3)])
            flagged |= res.flagged
            rows.append([N, k, res.estimate, res.iterations, res.converged, init is not None])
            prev = res
    rep.tables["homogenize"] = (["N", "k", "estimate", "iterations", "converged", "warm_start"], rows)
    rep.summary = {"A": A, "p": cfg.p, "variant": cfg.variant,
                   "estimates": [r[2] for r in rows], "flagged": flagged}
    rep.exit_code = NOT_REPRODUCED if flagged else OK
    return rep


def run_two_scale(cfg: RunConfig) -> Report:
    rep = Report("two-scale")
    U = ((cfg.U[0], cfg.U[1]), (cfg.U[2], cfg.U[3]))
    V = ((cfg.V[0], cfg.V[1]), (cfg.V[2], cfg.V[3]))
    errs = riemann_lebesgue_check(U, V, cfg.eps)
    rl_rows = [[str(e), float(e), float(err), float(err) <= float(e)] for e, err in zip(cfg.eps, errs)]
    rep.tables["riemann_lebesgue"] = (["eps", "eps_value", "error", "within_eps"], rl_rows)
    monotone = all(b <= a for a, b in zip(errs, errs[1:]))

    bins = LambdaBins(cfg.lambda_lo, cfg.lambda_hi, cfg.lambda_n)
    phase_sets = [sets.A1, sets.A2]
    lam = laminate_field(sets.A1_1, sets.A2_1, cfg.field_eps, cfg.field_N, 1)
    bad, n_bad = corrupt_field(lam, cfg.corrupt_fraction, 1.0, cfg.seed)
    sup_rows, checks = [], {}
    for name, f in (("laminate_B1", lam), ("corrupted_B1", bad)):
        m = empirical_two_scale_measure(f, y_bins=cfg.y_bins, lambda_bins=bins)
        ok, esc = support_check(m, LAMINATE_PARTITION, phase_sets, cfg.support_tol)
        frac = distance_fraction(f, LAMINATE_PARTITION, phase_sets, cfg.support_tol)
        sup_rows.append([name, ok, esc, frac])
        checks[name] = {"pass": ok, "escaped_mass": esc}
    rep.tables["support"] = (["field", "pass", "escaped_mass", "distance_fraction"], sup_rows)
    rep.summary = {"rl_errors": [float(e) for e in errs], "rl_monotone": monotone,
                   "corrupted_triangles": n_bad, "support": checks}
    return rep


COMMANDS = {
    "hulls": run_hulls,
    "counterexample": run_counterexample,
    "homogenize": run_homogenize,
    "two-scale": run_two_scale,
}

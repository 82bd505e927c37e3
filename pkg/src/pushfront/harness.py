"""Acceptance experiments E1-E7 as pipelines over the solver modules.

Each experiment reads a flat parameter dictionary (defaults below, overridable
from an INI file), runs module operations only, and returns an
:class:`ExperimentReport` listing every criterion once.  Reports are written as
``report.txt`` and ``report.csv``; CSV files start with a ``# schema=1`` line
and use ``repr``-exact floats so reruns are byte-identical.
"""

from __future__ import annotations

import configparser
import csv
import hashlib
import io
import json
import time
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import __version__
from .comparison_functions import (ResidualGrid, build_modulation, check_exponential_pair,
                                   check_main_pair, check_rothe_pair, check_wang_pair, tail_ratio_bound)
from .errors import ConfigError, PushfrontError
from .front_dynamics import (compare_U_V, derivative_norms, evolve_graph, fourier_graph, gamma_vs_V,
                             make_graph, smoothed_square_wave, stable_dt)
from .pde1d import Grid1D, exponential_data, fit_log_shift, run_front_convergence, step_data
from .pde2d import Grid2D, corrugated_data, run_2d
from .profile import classify_front, exact_hadeler_rothe, find_min_speed, measure_decay_exponent, solve_profile
from .reaction_terms import lambda_roots, make_hadeler_rothe, make_kpp

__all__ = [
    "Criterion",
    "ExperimentConfig",
    "ExperimentReport",
    "CATALOG",
    "SCHEMAS",
    "load_config",
    "run_experiment",
    "emit_report",
    "list_experiments",
    "write_csv",
]

SCHEMA_LINE = "# schema=1"

CATALOG = {
    "E1": "minimal speed and pushed/pulled classification for KPP, HR(4), HR(1)",
    "E2": "shot profiles against the closed-form HR front for nu in {3, 4, 6}",
    "E3": "logarithmic shift present for KPP, absent for the pushed HR(4) front",
    "E4": "supersolution families: shifted-profile, multiplicative, exponential and graph-modulated pairs",
    "E5": "curvature flow vs semilinear graph gap and derivative decay rates",
    "E6": "2D corrugated front: profile residual, level-set flattening, monotone band",
    "E7": "2D level set against the semilinear graph handed over at time tau",
}

# (type, default); strings with commas are parsed into float lists by _coerce
_STANDARD_2D = {
    "nu": (float, 4.0), "Lx": (float, 20.0), "nx": (int, 40), "dz": (float, 0.025),
    "z_lo": (float, -20.0), "z_hi": (float, 20.0), "dt": (float, 0.02), "T": (float, 200.0),
    "A": (float, 1.0), "sample_dt": (float, 1.0), "T_burn": (float, 5.0),
}

SCHEMAS = {
    "E1": {"tol": (float, 1e-9), "class_tol": (float, 1e-3), "speed_tol": (float, 1e-3),
           "exponent_tol": (float, 0.02)},
    "E2": {"nus": (list, [3.0, 4.0, 6.0]), "tol": (float, 1e-9), "dz": (float, 1e-3),
           "bound": (float, 1e-5), "z_span": (float, 20.0)},
    "E3": {"nu": (float, 4.0), "dz": (float, 0.05), "dt": (float, 0.02), "z_lo": (float, -60.0),
           "z_hi": (float, 60.0), "t_lo": (float, 50.0), "t_hi": (float, 500.0), "samples": (int, 120),
           "hr_rate": (float, -1.0)},
    "E4": {"nu": (float, 4.0), "q0": (float, 0.005), "wang_c": (float, 2.5), "wang_eps": (float, 0.05),
           "nz": (int, 801), "nt": (int, 51), "t_hi": (float, 50.0), "Lx": (float, 20.0),
           "main_nx": (int, 32), "main_nz": (int, 401), "amp": (float, 0.05), "flat_level": (float, 3.0)},
    "E5": {"nu": (float, 4.0), "Lx": (float, 20.0), "nx": (int, 40), "T": (float, 50.0),
           "small_amp": (float, 0.05), "amps": (list, [0.4, 0.2, 0.1]), "rate_Lx": (float, 200.0),
           "rate_nx": (int, 4000), "rate_width": (float, 0.5), "rate_samples": (int, 41),
           "t_lo": (float, 1.0), "t_hi": (float, 100.0)},
    "E6": dict(_STANDARD_2D, residual_time=(float, 100.0), early=(float, 10.0)),
    "E7": dict(_STANDARD_2D, tau1=(float, 20.0), tau2=(float, 40.0)),
    "sim1d": {"reaction": (str, "hadeler_rothe"), "nu": (float, 4.0), "c": (float, 0.0),
              "min_speed": (bool, True), "z_lo": (float, -60.0), "z_hi": (float, 60.0), "nz": (int, 2401),
              "dt": (float, 0.02), "T": (float, 100.0), "sample_dt": (float, 1.0), "level": (float, 0.5),
              "u0": (str, "exponential"), "u0_rate": (float, -1.0), "u0_shift": (float, 0.0)},
    "sim2d": dict(_STANDARD_2D, reaction=(str, "hadeler_rothe"), level=(float, 0.5)),
    "frontdyn": {"kind": (str, "both"), "drift": (bool, True), "c": (float, 2.1213203435596424),
                 "Lx": (float, 20.0), "nx": (int, 40), "T": (float, 50.0), "dt": (float, 0.0),
                 "modes": (list, [1.0, 0.05, 0.0]), "sample_dt": (float, 1.0)},
}

# keys that must be strictly positive when present
_POSITIVE = {"tol", "class_tol", "speed_tol", "exponent_tol", "dz", "bound", "z_span", "dt", "samples",
             "nz", "nt", "t_hi", "Lx", "nx", "main_nx", "main_nz", "T", "rate_Lx", "rate_nx",
             "rate_width", "rate_samples", "t_lo", "sample_dt", "wang_eps", "q0", "residual_time",
             "early", "tau1", "tau2", "nu"}


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict
    out: Path | None = None

    @classmethod
    def default(cls, experiment: str, out=None, **overrides) -> "ExperimentConfig":
        if experiment not in SCHEMAS:
            raise ConfigError(f"unknown experiment {experiment!r}")
        params = {k: (list(v) if isinstance(v, list) else v) for k, (_, v) in SCHEMAS[experiment].items()}
        for k, v in overrides.items():
            if k not in params:
                raise ConfigError(f"unknown key {k!r} for {experiment}")
            params[k] = _coerce(SCHEMAS[experiment][k][0], v, k)
        cfg = cls(experiment, params, Path(out) if out else None)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        schema = SCHEMAS[self.experiment]
        for k, v in self.params.items():
            if k not in schema:
                raise ConfigError(f"unknown key {k!r} for {self.experiment}")
            if self.experiment == "frontdyn" and k == "dt":
                if v < 0:
                    raise ConfigError(f"dt must be >= 0 (0 selects the stable step), got {v}")
            elif k in _POSITIVE and not (v > 0):
                raise ConfigError(f"{k} must be positive, got {v}")
        if "z_lo" in self.params and not self.params["z_hi"] > self.params["z_lo"]:
            raise ConfigError("z_hi must exceed z_lo")

    @property
    def digest(self) -> str:
        blob = json.dumps({"experiment": self.experiment, "params": self.params}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _coerce(kind, value, key):
    try:
        if kind is bool:
            if isinstance(value, str):
                low = value.strip().lower()
                if low not in ("true", "false", "1", "0", "yes", "no"):
                    raise ValueError(value)
                return low in ("true", "1", "yes")
            return bool(value)
        if kind is list:
            if isinstance(value, str):
                return [float(s) for s in value.replace(";", ",").split(",") if s.strip()]
            return [float(s) for s in value]
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"cannot read {key}={value!r} as {kind.__name__}") from None


def load_config(path, experiment: str | None = None, out=None) -> ExperimentConfig:
    """Read an INI file.

    The ``[experiment]`` section may give ``id`` and ``out``; parameters are
    read from the section named after the experiment (or subcommand).  Any
    other section or key is rejected.
    """
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    head = dict(cp["experiment"]) if cp.has_section("experiment") else {}
    unknown_head = set(head) - {"id", "out"}
    if unknown_head:
        raise ConfigError(f"unknown keys in [experiment]: {sorted(unknown_head)}")
    exp = experiment or head.get("id")
    if exp is None:
        raise ConfigError("no experiment id given")
    extra = set(cp.sections()) - {"experiment", exp}
    if extra:
        raise ConfigError(f"unknown sections: {sorted(extra)}")
    overrides = dict(cp[exp]) if cp.has_section(exp) else {}
    return ExperimentConfig.default(exp, out=out or head.get("out"), **overrides)


@dataclass
class Criterion:
    name: str
    measured: object
    target: str
    tol: object
    passed: bool
    detail: str = ""


@dataclass
class ExperimentReport:
    id: str
    criteria: list
    wall_time: float
    provenance: dict
    tables: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.criteria) and all(c.passed for c in self.criteria)


def list_experiments():
    """``[(id, description), ...]`` for E1-E7."""
    return list(CATALOG.items())


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, header, rows) -> Path:
    """CSV with the schema line, a header and ``repr``-exact floats."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    buf.write(SCHEMA_LINE + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    path.write_text(buf.getvalue())
    return path


def emit_report(report: ExperimentReport, out_dir) -> list:
    """Write ``report.txt``, ``report.csv`` and any tables; returns the paths."""
    if not report.criteria:
        raise ValueError("a report needs at least one criterion")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = [write_csv(out / "report.csv", ["criterion", "measured", "target", "tol", "pass"],
                       [(c.name, c.measured, c.target, c.tol, c.passed) for c in report.criteria])]
    for name, (header, rows) in report.tables.items():
        paths.append(write_csv(out / name, header, rows))
    lines = [f"experiment {report.id}: {CATALOG.get(report.id, '')}",
             f"result: {'PASS' if report.passed else 'FAIL'}",
             f"wall time: {report.wall_time:.1f} s"]
    lines += [f"{k}: {v}" for k, v in report.provenance.items()]
    lines.append("")
    for c in report.criteria:
        mark = "PASS" if c.passed else "FAIL"
        lines.append(f"[{mark}] {c.name}: measured {_fmt(c.measured)} target {c.target} tol {_fmt(c.tol)}"
                     + (f"  ({c.detail})" if c.detail else ""))
    if report.notes:
        lines.append("")
        lines += [f"note: {n}" for n in report.notes]
    txt = out / "report.txt"
    txt.write_text("\n".join(lines) + "\n")
    paths.append(txt)
    return paths


# ------------------------------------------------------------- experiments

def _within(name, measured, target, tol):
    return Criterion(name, float(measured), repr(float(target)), float(tol),
                     bool(abs(measured - target) <= tol))


def _e1(p):
    kpp, hr4, hr1 = make_kpp(), make_hadeler_rothe(4.0), make_hadeler_rothe(1.0)
    out = []
    c_kpp = find_min_speed(kpp, p["tol"])
    out.append(_within("kpp_min_speed", c_kpp, 2.0, p["speed_tol"]))
    c_hr4 = find_min_speed(hr4, p["tol"])
    out.append(_within("hr4_min_speed", c_hr4, 3 / np.sqrt(2), p["speed_tol"]))
    prof4 = solve_profile(hr4, c_hr4)
    kind4 = classify_front(hr4, c_hr4, prof4, p["class_tol"]).value
    out.append(Criterion("hr4_classification", kind4, "pushed", "", kind4 == "pushed"))
    out.append(_within("hr4_tail_exponent", measure_decay_exponent(prof4), -np.sqrt(2), p["exponent_tol"]))
    c_hr1 = find_min_speed(hr1, p["tol"])
    kind1 = classify_front(hr1, c_hr1, solve_profile(hr1, c_hr1), p["class_tol"]).value
    out.append(Criterion("hr1_classification", kind1, "pulled", "", kind1 == "pulled",
                         f"c*={c_hr1!r}"))
    return out, {}, []


def _e2(p):
    out = []
    for nu in p["nus"]:
        f = make_hadeler_rothe(nu)
        shot = solve_profile(f, find_min_speed(f, p["tol"]), dz=p["dz"])
        exact = exact_hadeler_rothe(nu, dz=p["dz"])
        z = np.arange(-p["z_span"], p["z_span"] + p["dz"] / 2, p["dz"])
        err = float(np.max(np.abs(shot(z) - exact(z))))
        out.append(Criterion(f"sup_diff_nu_{nu:g}", err, f"<= {p['bound']!r}", p["bound"], err <= p["bound"]))
    return out, {}, []


def _e3(p):
    ts = np.geomspace(p["t_lo"], p["t_hi"], p["samples"])
    grid = Grid1D.from_spacing(p["z_lo"], p["z_hi"], p["dz"])
    kpp = make_kpp()
    tr_k = run_front_convergence(kpp, 2.0, step_data(grid), p["t_hi"], p["dt"], sample_times=ts)
    fit_k = fit_log_shift(tr_k.t, tr_k.sigma, (p["t_lo"], p["t_hi"]))
    hr = make_hadeler_rothe(p["nu"])
    c = find_min_speed(hr)
    tr_h = run_front_convergence(hr, c, exponential_data(grid, p["hr_rate"]), p["t_hi"], p["dt"], sample_times=ts)
    fit_h = fit_log_shift(tr_h.t, tr_h.sigma, (p["t_lo"], p["t_hi"]))
    sep = abs(fit_h.r - fit_k.r)
    out = [
        Criterion("pushed_log_coefficient", fit_h.r, "|r| <= 0.1", 0.1, abs(fit_h.r) <= 0.1,
                  f"c_fit={fit_h.c_fit:.6f} rms={fit_h.rms:.2e}"),
        Criterion("pulled_log_coefficient", fit_k.r, "in [-1.8, -1.2]", 0.3, -1.8 <= fit_k.r <= -1.2,
                  f"c_fit={fit_k.c_fit:.6f} rms={fit_k.rms:.2e}"),
        Criterion("log_coefficient_separation", sep, ">= 1.0", 1.0, sep >= 1.0),
    ]
    rows = [("kpp", t, x, s) for t, x, s in zip(tr_k.t, tr_k.xi, tr_k.sigma)]
    rows += [("hadeler_rothe", t, x, s) for t, x, s in zip(tr_h.t, tr_h.xi, tr_h.sigma)]
    return out, {"trace.csv": (["run", "t", "xi", "sigma"], rows)}, []


def _verdict(name, rep):
    return Criterion(name, rep.min if rep.expected == "super" else rep.max,
                     ">= -tol" if rep.expected == "super" else "<= tol", rep.tol, rep.passed,
                     ", ".join(f"{k}={v:.4g}" for k, v in rep.constants.items()))


def _e4(p):
    f = make_hadeler_rothe(p["nu"])
    c = find_min_speed(f)
    prof = solve_profile(f, c)
    grid = ResidualGrid.uniform(nz=p["nz"], nt=p["nt"], t_hi=p["t_hi"])
    out, notes = [], []
    rp, rm = check_rothe_pair(f, prof, p["q0"], grid=grid)
    out += [_verdict("rothe_super", rp), _verdict("rothe_sub", rm)]
    kpp = make_kpp()
    pw = solve_profile(kpp, p["wang_c"])
    wp, wm = check_wang_pair(kpp, pw, p["wang_eps"], grid=grid)
    out += [_verdict("wang_super", wp), _verdict("wang_sub", wm)]
    ep, em = check_exponential_pair(f, prof)
    out += [_verdict("exponential_super", ep), _verdict("exponential_sub", em)]
    k = tail_ratio_bound(prof)
    a_small = 0.5 * (2 * k + 1 - c)
    np_, nm = check_exponential_pair(f, prof, a=a_small)
    caught = not (np_.passed and nm.passed)
    out.append(Criterion("exponential_undersized_a_detected", max(np_.violation, nm.violation), "> 0",
                         0.0, caught, f"a={a_small:.4g}"))
    for label, V0 in (("flat", make_graph(p["Lx"], p["main_nx"], p["flat_level"])),
                      ("corrugated", fourier_graph(p["Lx"], p["main_nx"], [(1, p["amp"], 0.0)]))):
        g = ResidualGrid.uniform(nz=p["main_nz"], nt=p["nt"], t_hi=p["t_hi"], x=V0.x)
        mp, mm = check_main_pair(f, prof, V0, grid=g)
        out += [_verdict(f"main_{label}_super", mp), _verdict(f"main_{label}_sub", mm)]
        notes.append(f"main {label}: I in [{mp.diagnostics['I_min']:.3e}, {mp.diagnostics['I_max']:.3e}], "
                     f"eta inferred as (z - V)/sqrt(1 + V_x^2)")
    return out, {}, notes


def _e5(p):
    f = make_hadeler_rothe(p["nu"])
    c = find_min_speed(f)
    out, rows = [], []
    small = compare_U_V(fourier_graph(p["Lx"], p["nx"], [(1, p["small_amp"], 0.0)]), c, p["T"])
    out.append(Criterion("gap_small_amplitude", small.max_gap, "<= 0.01", 0.01, small.max_gap <= 0.01))
    gaps = {}
    for A in p["amps"]:
        g = compare_U_V(fourier_graph(p["Lx"], p["nx"], [(1, A, 0.0)]), c, p["T"])
        gaps[A] = g.max_gap
        rows.append((A, g.grad_norm, g.max_gap))
    amps = sorted(gaps, reverse=True)
    for big, half in zip(amps, amps[1:]):
        ratio = gaps[half] / gaps[big] if gaps[big] > 0 else 0.0
        out.append(Criterion(f"gap_halving_{big:g}", ratio, "gap(A/2)/gap(A) <= 0.5", 0.5, ratio <= 0.5))
    V = smoothed_square_wave(p["rate_Lx"], p["rate_nx"], width=p["rate_width"])
    dt = stable_dt(V.dx)
    snaps = []
    for T in np.geomspace(p["t_lo"], p["t_hi"], p["rate_samples"]):
        if T - V.time > 0.5 * dt:
            n = int(np.ceil((T - V.time) / dt))
            V = evolve_graph(V, c, (T - V.time) / n, T - V.time, with_drift=False)
        snaps.append(V)
    norms = derivative_norms(snaps, c)
    for which, target, tol in (("V_x", -0.5, 0.15), ("V_xx", -1.0, 0.2), ("V_xxx", -1.5, 0.3), ("V_xt", -1.5, 0.3)):
        out.append(_within(f"decay_rate_{which}", norms.rate(which, (p["t_lo"], p["t_hi"])), target, tol))
    return out, {"gaps.csv": (["amplitude", "grad_norm", "max_gap"], rows)}, []


@lru_cache(maxsize=4)
def _standard_2d(key):
    p = dict(key)
    f = make_hadeler_rothe(p["nu"])
    c = find_min_speed(f)
    prof = solve_profile(f, c)
    grid = Grid2D.from_spacing(p["Lx"], p["nx"], p["z_lo"], p["z_hi"], p["dz"])
    return c, prof, run_2d(f, c, corrugated_data(grid, prof, p["A"]), prof, p["T"], p["dt"],
                           sample_dt=p["sample_dt"], level=0.5)


def standard_2d_run(params: dict):
    """The corrugated HR run shared by E6 and E7 (memoized on its parameters)."""
    key = tuple(sorted((k, params[k]) for k in _STANDARD_2D))
    return _standard_2d(key)


def _levelset_rows(run):
    return [(t, x, g) for t, row in zip(run.t, run.gamma) for x, g in zip(run.x, row)]


def _e6(p):
    c, prof, run = standard_2d_run(p)
    d = run.diagnostics
    k_res = int(np.argmin(np.abs(run.t - p["residual_time"])))
    res = d["residual"][k_res]
    out = [Criterion("profile_residual_at_T", res, "<= 0.02", 0.02, bool(res <= 0.02), f"t={run.t[k_res]:g}")]
    k0 = int(np.argmin(np.abs(run.t - p["early"])))
    for key, name in (("sup_gx", "gamma_x_shrink"), ("sup_gxx", "gamma_xx_shrink")):
        ratio = d[key][k0] / d[key][-1] if d[key][-1] > 0 else np.inf
        out.append(Criterion(name, float(ratio), ">= 5", 5.0, bool(ratio >= 5.0)))
    late = run.t >= p["T_burn"]
    worst = float(np.min(d["min_minus_uz"][late]))
    out.append(Criterion("band_monotone_after_burn_in", worst, "> 0", 0.0, worst > 0))
    missing = int(np.sum(~np.all(np.isfinite(run.gamma[late]), axis=1)))
    notes = [f"samples after burn-in without a graph-like level set: {missing}"]
    diag_rows = [tuple([t] + [d[k][i] for k in run.DIAG_COLUMNS]) for i, t in enumerate(run.t)]
    tables = {"levelset.csv": (["t", "x", "gamma"], _levelset_rows(run)),
              "diagnostics.csv": (["t", *run.DIAG_COLUMNS], diag_rows)}
    return out, tables, notes


def _e7(p):
    c, prof, run = standard_2d_run(p)
    g1 = gamma_vs_V(run.t, run.gamma, run.x, p["tau1"], c, p["T"])
    g2 = gamma_vs_V(run.t, run.gamma, run.x, p["tau2"], c, p["T"])
    out = [Criterion("gamma_V_gap_tau1", g1.max_gap, "<= 0.1", 0.1, g1.max_gap <= 0.1, f"tau={p['tau1']:g}"),
           Criterion("gamma_V_gap_tau2_not_larger", g2.max_gap, f"<= {g1.max_gap!r}", 0.0,
                     g2.max_gap <= g1.max_gap, f"tau={p['tau2']:g}")]
    rows = [(p["tau1"], t, g) for t, g in zip(g1.t, g1.gap)] + [(p["tau2"], t, g) for t, g in zip(g2.t, g2.gap)]
    return out, {"compare.csv": (["tau", "t", "gap"], rows)}, []


_RUNNERS = {"E1": _e1, "E2": _e2, "E3": _e3, "E4": _e4, "E5": _e5, "E6": _e6, "E7": _e7}


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Run one experiment; solver errors become a failed ``pipeline`` criterion."""
    if cfg.experiment not in _RUNNERS:
        raise ConfigError(f"{cfg.experiment!r} is not an experiment id")
    cfg.validate()
    t0 = time.perf_counter()
    try:
        criteria, tables, notes = _RUNNERS[cfg.experiment](cfg.params)
    except (PushfrontError, ValueError, FloatingPointError) as exc:
        criteria = [Criterion("pipeline", type(exc).__name__, "no error", "", False, str(exc))]
        tables, notes = {}, []
    prov = {"config_hash": cfg.digest, "code_version": __version__,
            "equation_forms": "squared gradients in the curvature flow and semilinear graph equations"}
    report = ExperimentReport(cfg.experiment, criteria, time.perf_counter() - t0, prov, tables, notes)
    if cfg.out is not None:
        emit_report(report, cfg.out)
    return report

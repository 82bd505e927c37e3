"""Command-line interface.

Subcommands: ``profile``, ``minspeed``, ``sim1d``, ``sim2d``, ``frontdyn``,
``verify-comparison``, ``experiment <id>`` and ``list``.  Config-driven
subcommands read the INI section named after them (see
:data:`pushfront.harness.SCHEMAS`) and accept ``--set key=value``
overrides.  All outputs are CSV files with a ``# schema=1`` first line.
Exit status is 0 on success, 1 when a check or experiment fails and 2 on
bad input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

SEARCHABLE = ("rothe", "wang", "exponential", "main")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pushfront", description=__doc__.splitlines()[0])
    ap.add_argument("--config", type=Path, help="INI file; the section named after the subcommand is read")
    ap.add_argument("--out", type=Path, help="output directory (default: out/<subcommand>)")
    ap.add_argument("--threads", type=int, default=1, help="worker threads; the solvers are serial, so only 1 is meaningful")
    ap.add_argument("--seedless", action="store_true", help="fail if any random number generator is used")
    sub = ap.add_subparsers(dest="command", required=True)

    def reaction_flags(p):
        p.add_argument("--reaction", default="hadeler_rothe", choices=("kpp", "hadeler_rothe"))
        p.add_argument("--nu", type=float, default=4.0)

    p = sub.add_parser("profile", help="solve a front profile and write z,phi,phi_prime")
    reaction_flags(p)
    speed = p.add_mutually_exclusive_group(required=True)
    speed.add_argument("--c", type=float)
    speed.add_argument("--min-speed", action="store_true")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--dz", type=float, default=1e-3)
    p.add_argument("--output", type=Path)

    p = sub.add_parser("minspeed", help="minimal speed, classification and tail exponent")
    reaction_flags(p)
    p.add_argument("--tol", type=float, default=1e-9)

    for name, text in (("sim1d", "1D moving-frame run; writes trace.csv and final_state.csv"),
                       ("sim2d", "2D corrugated run; writes levelset.csv and diagnostics.csv"),
                       ("frontdyn", "graph evolutions; writes graph.csv and compare.csv")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")

    p = sub.add_parser("verify-comparison", help="sign check of a comparison-function family")
    p.add_argument("candidate", choices=SEARCHABLE)
    p.add_argument("--search", action="store_true", help="search the built-in constant ladders")
    p.add_argument("--nu", type=float, default=4.0, help="HR parameter (rothe, exponential, main)")
    p.add_argument("--q0", type=float, default=0.005)
    p.add_argument("--beta", type=float)
    p.add_argument("--C", type=float)
    p.add_argument("--eps", type=float, help="wang: perturbation size; main: modulation budget")
    p.add_argument("--sigma", type=float)
    p.add_argument("--speed", type=float, default=2.5, help="wang: KPP front speed")
    p.add_argument("--a", type=float, help="exponential: speed of the correction")
    p.add_argument("--C0", type=float)
    p.add_argument("--C1", type=float)
    p.add_argument("--C2", type=float)
    p.add_argument("--graph", default="corrugated", choices=("flat", "corrugated"))
    p.add_argument("--amp", type=float, default=0.05)
    p.add_argument("--Lx", type=float, default=20.0)
    p.add_argument("--nx", type=int, default=32)
    p.add_argument("--z-lo", type=float, default=-40.0)
    p.add_argument("--z-hi", type=float, default=40.0)
    p.add_argument("--nz", type=int, default=801)
    p.add_argument("--t-hi", type=float, default=50.0)
    p.add_argument("--nt", type=int, default=51)
    p.add_argument("--residual-csv", action="store_true", help="also write residual.csv (t,z,L)")

    p = sub.add_parser("experiment", help="run one acceptance experiment")
    p.add_argument("id", help="E1 ... E7")

    sub.add_parser("list", help="list the acceptance experiments")
    return ap


def _forbid_rng():
    import random

    import numpy as np

    def refuse(*args, **kwargs):
        raise RuntimeError("random number generator consulted under --seedless")

    for name in ("default_rng", "seed", "rand", "randn", "random", "normal", "uniform", "randint",
                 "choice", "shuffle", "permutation", "RandomState"):
        setattr(np.random, name, refuse)
    for name in ("random", "seed", "uniform", "gauss", "randint", "choice", "shuffle"):
        setattr(random, name, refuse)


def _kv(pairs):
    out = {}
    for item in pairs:
        key, sep, val = item.partition("=")
        if not sep:
            raise SystemExit(f"--set expects KEY=VALUE, got {item!r}")
        out[key.strip()] = val.strip()
    return out


def _config(args, name):
    from .harness import ExperimentConfig, load_config

    overrides = _kv(getattr(args, "set", []))
    if args.config is None:
        return ExperimentConfig.default(name, **overrides)
    params = load_config(args.config, experiment=name).params
    return ExperimentConfig.default(name, **{**params, **overrides})


def _out(args, name) -> Path:
    return args.out if args.out is not None else Path("out") / name


def _reaction(name, nu):
    from .reaction_terms import make_reaction

    return make_reaction(name, nu=nu)


def cmd_profile(args):
    from .harness import write_csv
    from .profile import find_min_speed, solve_profile

    f = _reaction(args.reaction, args.nu)
    c = find_min_speed(f, args.tol) if args.min_speed else args.c
    p = solve_profile(f, c, dz=args.dz)
    path = args.output or _out(args, "profile") / "profile.csv"
    write_csv(path, ["z", "phi", "phi_prime"], zip(p.z, p.phi, p.phi_prime))
    print(f"c={c!r} nodes={p.z.size} -> {path}")
    return 0


def cmd_minspeed(args):
    from .profile import classify_front, find_min_speed, measure_decay_exponent, solve_profile

    f = _reaction(args.reaction, args.nu)
    c = find_min_speed(f, args.tol)
    p = solve_profile(f, c)
    print(f"c*={c!r}")
    print(f"class={classify_front(f, c, p).value}")
    print(f"tail_exponent={measure_decay_exponent(p)!r}")
    return 0


def cmd_sim1d(args):
    from .harness import write_csv
    from .pde1d import Grid1D, exponential_data, profile_data, run_front_convergence, step_data
    from .profile import find_min_speed, solve_profile

    q = _config(args, "sim1d").params
    f = _reaction(q["reaction"], q["nu"])
    c = find_min_speed(f) if q["min_speed"] else q["c"]
    grid = Grid1D(q["z_lo"], q["z_hi"], q["nz"])
    kind = q["u0"]
    if kind == "step":
        u0 = step_data(grid, q["u0_shift"])
    elif kind == "exponential":
        u0 = exponential_data(grid, q["u0_rate"])
    elif kind == "profile":
        u0 = profile_data(grid, solve_profile(f, c), q["u0_shift"])
    else:
        raise SystemExit(f"u0 must be step, exponential or profile, got {kind!r}")
    tr = run_front_convergence(f, c, u0, q["T"], q["dt"], sample_dt=q["sample_dt"], level=q["level"])
    out = _out(args, "sim1d")
    write_csv(out / "trace.csv", ["t", "xi", "sigma"], zip(tr.t, tr.xi, tr.sigma))
    write_csv(out / "final_state.csv", ["z", "u"], zip(tr.final.grid.z, tr.final.values))
    print(f"c={c!r} xi(T)={float(tr.xi[-1])!r} widenings={len(tr.widenings)} -> {out}")
    return 0


def cmd_sim2d(args):
    from .harness import write_csv
    from .pde2d import Grid2D, Run2D, corrugated_data, run_2d
    from .profile import find_min_speed, solve_profile

    q = _config(args, "sim2d").params
    f = _reaction(q["reaction"], q["nu"])
    c = find_min_speed(f)
    p = solve_profile(f, c)
    grid = Grid2D.from_spacing(q["Lx"], q["nx"], q["z_lo"], q["z_hi"], q["dz"])
    run = run_2d(f, c, corrugated_data(grid, p, q["A"]), p, q["T"], q["dt"],
                 sample_dt=q["sample_dt"], level=q["level"])
    out = _out(args, "sim2d")
    write_csv(out / "levelset.csv", ["t", "x", "gamma"],
              [(t, x, g) for t, row in zip(run.t, run.gamma) for x, g in zip(run.x, row)])
    d = run.diagnostics
    write_csv(out / "diagnostics.csv", ["t", *Run2D.DIAG_COLUMNS],
              [(t, *(d[k][i] for k in Run2D.DIAG_COLUMNS)) for i, t in enumerate(run.t)])
    print(f"c={c!r} final residual={float(d['residual'][-1])!r} -> {out}")
    return 0


def cmd_frontdyn(args):
    import numpy as np

    from .front_dynamics import compare_U_V, evolve_graph, fourier_graph, stable_dt
    from .harness import write_csv

    q = _config(args, "frontdyn").params
    modes = q["modes"]
    if len(modes) % 3:
        raise SystemExit("modes must be a flat list of (k, a, b) triples")
    triples = [tuple(modes[i:i + 3]) for i in range(0, len(modes), 3)]
    kinds = ("mcf", "semilinear") if q["kind"] == "both" else (q["kind"],)
    if not set(kinds) <= {"mcf", "semilinear"}:
        raise SystemExit(f"kind must be mcf, semilinear or both, got {q['kind']!r}")
    out = _out(args, "frontdyn")
    W0 = fourier_graph(q["Lx"], q["nx"], triples, kind=kinds[0], c=q["c"])
    dt = q["dt"] if q["dt"] > 0 else stable_dt(W0.dx)
    # ceil keeps the adjusted step at or below the stable one
    per = max(1, int(np.ceil(q["sample_dt"] / dt - 1e-12)))
    dt = q["sample_dt"] / per
    for kind in kinds:
        W0 = fourier_graph(q["Lx"], q["nx"], triples, kind=kind, c=q["c"])
        _, snaps = evolve_graph(W0, q["c"], dt, q["T"], with_drift=q["drift"], sample_every=per)
        name = "graph.csv" if kind == kinds[0] else f"graph_{kind}.csv"
        write_csv(out / name, ["t", "x", "w"], [(W.time, x, w) for W in snaps for x, w in zip(W.x, W.values)])
    if len(kinds) == 2:
        gaps = compare_U_V(W0, q["c"], q["T"], dt=dt, sample_dt=q["sample_dt"])
        write_csv(out / "compare.csv", ["t", "gap"], zip(gaps.t, gaps.gap))
        print(f"max gap={gaps.max_gap!r}")
    print(f"-> {out}")
    return 0


def cmd_verify(args):
    import numpy as np

    from .comparison_functions import (CutoffPsi, ExponentialCandidate, ModulatedCandidate, ResidualGrid,
                                       RotheCandidate, WangCandidate, build_modulation, check_exponential_pair,
                                       check_main_pair, check_rothe_pair, check_wang_pair, default_lambda1)
    from .front_dynamics import fourier_graph, make_graph
    from .harness import write_csv
    from .profile import find_min_speed, solve_profile
    from .reaction_terms import make_hadeler_rothe, make_kpp

    kind = args.candidate
    need = {"rothe": ("beta", "C"), "wang": ("sigma", "beta"), "main": ("C0", "C1", "C2"), "exponential": ()}[kind]
    given = all(getattr(args, k) is not None for k in need)
    if not (given or args.search):
        raise SystemExit(f"{kind}: give {', '.join('--' + k for k in need)} or --search")
    if kind == "wang":
        f = make_kpp()
        p = solve_profile(f, args.speed)
    else:
        f = make_hadeler_rothe(args.nu)
        p = solve_profile(f, find_min_speed(f))
    z = np.linspace(args.z_lo, args.z_hi, args.nz)
    t = np.linspace(0.0, args.t_hi, args.nt)
    fixed = {k: getattr(args, k) for k in need} if given else {}
    if kind == "rothe":
        reps = check_rothe_pair(f, p, args.q0, grid=ResidualGrid(z, t), **fixed)
    elif kind == "wang":
        reps = check_wang_pair(f, p, args.eps if args.eps is not None else 0.05, grid=ResidualGrid(z, t), **fixed)
    elif kind == "exponential":
        reps = check_exponential_pair(f, p, a=args.a, z_lo=args.z_lo, z_hi=args.z_hi, nz=args.nz, nt=args.nt)
    else:
        V0 = (make_graph(args.Lx, args.nx, 3.0) if args.graph == "flat"
              else fourier_graph(args.Lx, args.nx, [(1, args.amp, 0.0)]))
        eps = args.eps if args.eps is not None else 1.0
        mod = build_modulation(eps, 1.0, args.C0, args.C1, args.C2) if given else None
        reps = check_main_pair(f, p, V0, grid=ResidualGrid(z, t, x=V0.x), mod=mod, eps=eps)
    for rep in reps:
        print(rep.summary())
        for k, v in rep.diagnostics.items():
            print(f"  {k}: {v}")
    if args.residual_csv:
        rows = []
        for rep in reps:
            s = 1 if rep.expected == "super" else -1
            k = rep.constants
            if kind == "rothe":
                cand = RotheCandidate(p, CutoffPsi(k["lambda1"]), k["q0"], k["z1"], k["z2"], k["beta"], k["C"], s)
            elif kind == "wang":
                cand = WangCandidate(p, k["eps"], k["sigma"], k["beta"], s)
            elif kind == "exponential":
                cand = ExponentialCandidate(p, k["a"], k["z0"], s)
            else:
                m = build_modulation(k["eps"], k["K"], k["C0"], k["C1"], k["C2"]) if "C0" in k else None
                cand = ModulatedCandidate(p, CutoffPsi(default_lambda1(f, p.c)), V0, m, s)
            tt = np.linspace(0.0, (z[-1] - 10.0) / k["a"], args.nt) if kind == "exponential" else t
            if kind == "main":
                L = cand.split(f, p.c, tt, z)[0][:, 0, :]
            else:
                T, Z = np.meshgrid(tt, z, indexing="ij")
                L = cand.residual(f, p.c, None, Z, T)
            rows += [(rep.candidate, ti, zj, L[i, j]) for i, ti in enumerate(tt) for j, zj in enumerate(z)]
        path = write_csv(_out(args, "verify-comparison") / "residual.csv", ["candidate", "t", "z", "L"], rows)
        print(f"-> {path}")
    return 0 if all(r.passed for r in reps) else 1


def cmd_experiment(args):
    from .harness import emit_report, load_config, ExperimentConfig, run_experiment

    exp = args.id.upper()
    cfg = load_config(args.config, experiment=exp) if args.config else ExperimentConfig.default(exp)
    report = run_experiment(cfg)
    paths = emit_report(report, args.out if args.out is not None else (cfg.out or Path("out") / exp))
    for c in report.criteria:
        print(f"{'PASS' if c.passed else 'FAIL'} {report.id} {c.name}: measured={c.measured} target {c.target}")
    print(f"{report.id}: {'PASS' if report.passed else 'FAIL'} in {report.wall_time:.1f} s -> {paths[0].parent}")
    return 0 if report.passed else 1


def cmd_list(args):
    from .harness import list_experiments

    for eid, text in list_experiments():
        print(f"{eid}  {text}")
    return 0


COMMANDS = {"profile": cmd_profile, "minspeed": cmd_minspeed, "sim1d": cmd_sim1d, "sim2d": cmd_sim2d,
            "frontdyn": cmd_frontdyn, "verify-comparison": cmd_verify, "experiment": cmd_experiment,
            "list": cmd_list}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.threads < 1:
        print("--threads must be >= 1", file=sys.stderr)
        return 2
    if args.threads > 1:
        print(f"note: solvers are serial; --threads {args.threads} runs single-threaded", file=sys.stderr)
    if args.seedless:
        _forbid_rng()
    if args.config is not None and args.command in ("profile", "minspeed", "verify-comparison", "list"):
        print(f"{args.command} takes flags only, not --config", file=sys.stderr)
        return 2
    from .errors import ConfigError, PushfrontError

    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (PushfrontError, ValueError, FloatingPointError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

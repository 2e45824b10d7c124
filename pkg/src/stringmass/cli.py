"""Command-line front end.

Wires a JSON configuration to the numerical modules and writes every
table, report, and signal as plain CSV/text files.  All numeric output
uses round-trip decimal formatting and carries no timestamps, so
rerunning a subcommand with the same arguments produces byte-identical
files.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 acceptance failure under `verify`.
"""

from __future__ import annotations

import argparse
import csv
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import acceptance as ac
from . import control as ct
from . import gaps as gp
from . import modes as md
from . import observability as ob
from . import simulator as sim
from . import spectrum as sp
from .coefficients import config_from_file
from .errors import ConfigError, StringmassError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_ACCEPTANCE = 4


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _write_report(path, pairs):
    with open(path, "w") as fh:
        for key, val in pairs:
            fh.write(f"{key} = {_fmt(val)}\n")


def _load_config(args):
    if args.config is None:
        with resources.as_file(resources.files("stringmass").joinpath(
                "data/default_config.json")) as p:
            return config_from_file(p)
    path = Path(args.config)
    if not path.exists():
        raise ConfigError(f"configuration file not found: {path}")
    return config_from_file(path)


def _out_dir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_spectrum(args):
    cfg = _load_config(args)
    out = _out_dir(args)
    table = sp.build_spectrum_table(args.n_modes, cfg)
    rows = [(n + 1, table.mu[n], table.mu_tags[n], table.lambda_prime[n],
             table.lam[n], table.sqrt_lam[n], int(table.fused[n]))
            for n in range(table.count)]
    _write_csv(out / "spectrum.csv",
               ["n", "mu", "mu_tag", "lambda_prime", "lambda", "sqrt_lambda",
                "fused"], rows)
    return EXIT_OK


def cmd_gaps(args):
    cfg = _load_config(args)
    out = _out_dir(args)
    table = sp.build_spectrum_table(args.n_modes, cfg)
    cls = gp.classify_indices(table)
    om = table.sqrt_lam
    rows = [(n + 1, om[n], om[n + 1] - om[n]) for n in range(table.count - 1)]
    _write_csv(out / "gaps.csv", ["n", "omega", "gap"], rows)
    rep = gp.verify_gap_asymptotics(table)
    pairs = [("delta_prime", cls.delta_prime),
             ("A", " ".join(str(n) for n in cls.A)),
             ("B", " ".join(str(n) for n in cls.B)),
             ("B_plus", " ".join(str(n) for n in cls.Bplus)),
             ("B_minus", " ".join(str(n) for n in cls.Bminus)),
             ("Lambda", " ".join(str(n) for n in cls.Lambda)),
             ("Lambda_star", " ".join(str(n) for n in cls.LambdaStar))]
    for key in sorted(rep):
        val = rep[key]
        if isinstance(val, np.ndarray):
            val = " ".join(_fmt(v) for v in val)
        pairs.append((key, val))
    _write_report(out / "gaps_report.txt", pairs)
    return EXIT_OK


def cmd_modes(args):
    cfg = _load_config(args)
    out = _out_dir(args)
    table = sp.build_spectrum_table(args.n_modes, cfg)
    mode_list = md.compute_modes(table, cfg)
    summary = []
    for m in mode_list:
        x = np.concatenate([m.x_left, m.x_right])
        phi = np.concatenate([m.phi_left, m.phi_right])
        dphi = np.concatenate([m.dphi_left, m.dphi_right])
        _write_csv(out / f"mode_{m.n:03d}.csv", ["x", "phi", "phi_prime"],
                   zip(x, phi, dphi))
        summary.append((m.n, m.lam, m.phi0, m.slope_end, m.norm_w, m.norm_h0,
                        m.branch))
    _write_csv(out / "modes_summary.csv",
               ["n", "lambda", "phi0", "slope1", "normW", "normH0", "branch"],
               summary)
    return EXIT_OK


def cmd_observe(args):
    cfg = _load_config(args)
    out = _out_dir(args)
    table = sp.build_spectrum_table(args.n_modes, cfg)
    mode_list = md.compute_modes(table, cfg)
    slopes = md.boundary_slopes(mode_list)
    T = args.T if args.T is not None else 2.0 * (table.gamma1 + table.gamma2) + 0.5
    ratios, cmin, cmax = ob.empirical_constants(table, slopes, T,
                                                trials=args.trials,
                                                seed=args.seed)
    _write_csv(out / "observe.csv", ["trial", "ratio"],
               [(k + 1, r) for k, r in enumerate(ratios)])
    _write_report(out / "observe_report.txt",
                  [("T", T),
                   ("critical_horizon", 2.0 * (table.gamma1 + table.gamma2)),
                   ("density_upper", (table.gamma1 + table.gamma2) / np.pi),
                   ("trials", args.trials),
                   ("seed", args.seed),
                   ("c_min", cmin),
                   ("c_max", cmax),
                   ("spread", cmax / cmin)])
    return EXIT_OK


def cmd_control(args):
    cfg = _load_config(args)
    out = _out_dir(args)
    count = max(args.n_modes + 8, int(1.5 * args.n_modes))
    table = sp.build_spectrum_table(count, cfg)
    mode_list = md.compute_modes(table, cfg)
    T = args.T if args.T is not None else 2.0 * (table.gamma1 + table.gamma2) + 0.5
    # seeded decaying initial data supported on the controlled modes
    rng = np.random.default_rng(args.seed)
    ns = np.arange(1, count + 1)
    e = np.zeros(count)
    f = np.zeros(count)
    e[:args.n_modes] = rng.standard_normal(args.n_modes) / ns[:args.n_modes] ** 2
    f[:args.n_modes] = rng.standard_normal(args.n_modes) / ns[:args.n_modes] ** 2
    data = md.ModalData(ns=ns, lam=table.lam, e=e, f=f)
    prob = ct.modal_reduction(data, mode_list, table, cfg, T, args.n_modes)
    sig = ct.solve_min_norm(prob)
    rep = ct.duhamel_report(sig, prob)
    _write_csv(out / "control.csv", ["t", "p"], zip(sig.t, sig.p))
    _write_csv(out / "control_moments.csv",
               ["n", "omega", "target_re", "target_im", "achieved_re",
                "achieved_im"],
               [(int(prob.ns[j]), sig.omegas[j], sig.targets[j].real,
                 sig.targets[j].imag, sig.achieved[j].real,
                 sig.achieved[j].imag) for j in range(sig.omegas.size)])
    _write_report(out / "control_report.txt",
                  [("T", T), ("n_control", args.n_modes), ("seed", args.seed)]
                  + sorted(rep.items()))
    return EXIT_OK


def cmd_simulate(args):
    cfg = _load_config(args)
    out = _out_dir(args)
    table = sp.build_spectrum_table(args.n_modes, cfg)
    mode_list = md.compute_modes(table, cfg)
    x, m = sim.grid(args.dx)
    rng = np.random.default_rng(args.seed)
    ns = np.arange(1, args.n_modes + 1)
    e = rng.standard_normal(args.n_modes) / ns ** 2
    f = rng.standard_normal(args.n_modes) / ns ** 2
    w0, v0 = sim.sample_modal_state(mode_list, e, f, x, m)
    T = args.T if args.T is not None else 2.0 * (table.gamma1 + table.gamma2)
    traj = sim.simulate(cfg, (w0, v0), T=T, dx=args.dx, dt=args.dt)
    _write_csv(out / "trajectory.csv", ["t", "trace", "z"],
               zip(traj.trace_t, traj.trace, traj.z))
    _write_csv(out / "energy.csv", ["t", "energy"],
               zip(traj.energy_t, traj.energy))
    _write_csv(out / "final_state.csv", ["x", "w", "wt"],
               zip(traj.x, traj.w_final, traj.wt_final))
    _write_report(out / "simulate_report.txt",
                  [("T", traj.T), ("dx", traj.dx), ("dt", traj.dt),
                   ("seed", args.seed), ("n_modes", args.n_modes),
                   ("energy_drift", traj.energy_drift)])
    return EXIT_OK


def cmd_verify(args):
    out = _out_dir(args)
    first = ac.run_all(args.seed)
    body_first = ac.render_report(first)
    second = ac.run_all(args.seed)
    identical = body_first == ac.render_report(second)
    repro = ac.CriterionResult(10, "reproducibility of the acceptance suite",
                               identical, {"identical_reruns": identical,
                                           "seed": args.seed})
    report = body_first + ac.render_report([repro])
    (out / "acceptance_report.txt").write_text(report)
    sys.stdout.write(report)
    ok = identical and all(r.passed for r in first)
    return EXIT_OK if ok else EXIT_ACCEPTANCE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="stringmass",
        description="Spectral analysis, observability, boundary control, and "
                    "simulation of two strings coupled by a point mass.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, n_modes=20):
        p.add_argument("--config", help="JSON configuration file "
                       "(defaults to the shipped unit configuration)")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--n-modes", dest="n_modes", type=int, default=n_modes)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("spectrum", help="eigenvalue tables")
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("gaps", help="gap classification and asymptotics")
    common(p, n_modes=42)
    p.set_defaults(func=cmd_gaps)

    p = sub.add_parser("modes", help="eigenfunction tables")
    common(p, n_modes=12)
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("observe", help="observability sandwich constants")
    common(p, n_modes=30)
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_observe)

    p = sub.add_parser("control", help="synthesize and verify a control")
    common(p, n_modes=16)
    p.add_argument("--T", type=float, default=None)
    p.set_defaults(func=cmd_control)

    p = sub.add_parser("simulate", help="finite-difference trajectory")
    common(p, n_modes=10)
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--dx", type=float, default=1.0 / 512)
    p.add_argument("--dt", type=float, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StringmassError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end: ``lbmcrack {run,steady,kcrit,calibrate}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__
from .errors import ConfigError, NumericalError
from .experiments import (KCRIT_T_MAX, KCRIT_W0, N_SAMPLES, WINDOW, experiment_k_criterion,
                          k_criterion_config, stats_summary, steady_strip_config, window_samples)
from .config import load_config
from .io import CsvSink, SnapshotWriter
from .lattice import DEFAULT_KAPPA, LatticeSpec, MaterialParams, calibrate_wave_speed, check_stability
from .simulation import Simulation

log = logging.getLogger("lbmcrack")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


def _hooks(args, out):
    if args.snapshot_every and args.snapshot_every > 0:
        return [SnapshotWriter(os.path.join(out, "snapshots"), args.snapshot_every)]
    return []


def _simulate(cfg, args, out, name):
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, f"{name}.json"), "w") as fh:
        fh.write(cfg.to_json() + "\n")
    sim = Simulation.from_config(cfg, backend=args.backend, hooks=_hooks(args, out))
    csv_path = os.path.join(out, f"{name}.csv")
    with CsvSink(csv_path) as sink:
        series = sim.run(cfg.run.t_max, cfg.run.sample_stride, on_sample=sink)
    log.info("wrote %s (%d rows)", csv_path, len(series))
    return sim, series


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.snapshot_every is None:
        args.snapshot_every = cfg.run.snapshot_every
    name = os.path.splitext(os.path.basename(args.config))[0]
    _simulate(cfg, args, args.out, name)
    return EXIT_OK


def cmd_steady(args) -> int:
    cfg = steady_strip_config(args.v, dh=args.dh, r_min=args.rmin, t0=args.t0, w0=args.w0)
    _, series = _simulate(cfg, args, args.out, cfg.name)
    times = [r.t for r in series]
    K = [abs(r.tips["right"][0]) for r in series]
    _, ks = window_samples(times, K, times[-1], WINDOW, N_SAMPLES)
    st = stats_summary(ks)
    print(json.dumps({"v": args.v, "median": st.median, "mean": st.mean, "std": st.std,
                      "minus25": st.minus25, "plus75": st.plus75}, sort_keys=True))
    return EXIT_OK


def cmd_kcrit(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    cfg = k_criterion_config(dh=args.dh, w0=args.w0, t_max=args.t_max)
    with open(os.path.join(args.out, f"{cfg.name}.json"), "w") as fh:
        fh.write(cfg.to_json() + "\n")
    csv_path = os.path.join(args.out, f"{cfg.name}.csv")
    with CsvSink(csv_path) as sink:
        sim, series = experiment_k_criterion(backend=args.backend, on_sample=sink,
                                             hooks=_hooks(args, args.out), dh=args.dh,
                                             w0=args.w0, t_max=args.t_max)
    final = series[-1].tips
    print(json.dumps({side: {"da": vals[2]} for side, vals in final.items()}, sort_keys=True))
    return EXIT_OK


def cmd_calibrate(args) -> int:
    material = MaterialParams(1.0, 1.0)
    rows = []
    for kappa in args.kappa:
        spec = LatticeSpec.from_material(8, 8, args.dh, material, kappa=kappa)
        try:
            speed = calibrate_wave_speed(spec, travel_sites=args.travel)
        except NumericalError:
            speed = float("nan")
        growth = check_stability(spec)
        rows.append({"kappa": kappa, "speed_ratio": speed / spec.cs, "growth_2d": growth,
                     "ok": bool(abs(speed / spec.cs - 1) <= 0.02 and growth <= 1.0 + 1e-9)})
    for r in rows:
        print(json.dumps(r, sort_keys=True))
    return EXIT_OK if any(r["ok"] for r in rows) else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--snapshot-every", type=int, default=None, metavar="N",
                        help="write a VTK snapshot of w every N steps")
    common.add_argument("--backend", choices=("python", "cython"), default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="lbmcrack", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", parents=[common], help="run a scenario from a JSON config")
    r.add_argument("config")
    r.add_argument("--out", default=".")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("steady", parents=[common], help="steady growth in a strip")
    s.add_argument("--v", type=float, required=True, help="crack speed relative to cs")
    s.add_argument("--rmin", type=float, default=None, help="evaluation distance (length)")
    s.add_argument("--dh", type=float, default=1 / 16)
    s.add_argument("--t0", type=float, default=None, help="load ramp duration")
    s.add_argument("--w0", type=float, default=0.2)
    s.add_argument("--out", default=".")
    s.set_defaults(func=cmd_steady)

    k = sub.add_parser("kcrit", parents=[common], help="K-criterion growth under a pulse")
    k.add_argument("--w0", type=float, default=KCRIT_W0)
    k.add_argument("--dh", type=float, default=2.0**-6)
    k.add_argument("--t-max", type=float, default=KCRIT_T_MAX)
    k.add_argument("--out", default=".")
    k.set_defaults(func=cmd_kcrit)

    c = sub.add_parser("calibrate", parents=[common], help="wave speed and stability per kappa")
    c.add_argument("--kappa", type=float, nargs="+", default=[1.5, DEFAULT_KAPPA, 3.0])
    c.add_argument("--dh", type=float, default=1 / 16)
    c.add_argument("--travel", type=int, default=240, help="travel distance in sites")
    c.set_defaults(func=cmd_calibrate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: simulate, analyze, verify-bounds, sweep."""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .analysis import bound_constants, bound_constants_json
from .channels import TransitionMatrix
from .concentration import BUILTIN_PROCESSES, DriftBoundParams, empirical_tail_check
from .harness import DEFAULT_SEED, config_from_dict, load_config, run_experiment
from .schedules import make_schedule


def _parse_schedule_arg(text: str):
    if ":" not in text:
        return text
    sid, _, params = text.partition(":")
    if sid != "affine_log":
        raise argparse.ArgumentTypeError(f"only affine_log takes parameters, got {sid!r}")
    parts = params.split(",")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError("expected affine_log:offset,coef[,depth]")
    spec = {"id": "affine_log", "offset": float(parts[0]), "coef": float(parts[1])}
    if len(parts) == 3:
        spec["depth"] = int(parts[2])
    return spec


def _add_config_overrides(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="JSON config file; flags override its fields")
    p.add_argument("--p01", type=float, help="P(busy -> free)")
    p.add_argument("--p11", type=float, help="P(free -> free)")
    p.add_argument("--n-channels", type=int, dest="n_channels")
    p.add_argument("--L", type=float, dest="L")
    p.add_argument("--schedule", type=_parse_schedule_arg, help="k1|k2|k3|affine_log:offset,coef[,depth]")
    p.add_argument("--horizon", type=int)
    p.add_argument("--replicates", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--omega1", type=float, nargs="+", help="initial belief, one value per channel")
    p.add_argument("--out-dir", dest="out_dir")


def _build_config(args) -> dict:
    d = {}
    if args.config is not None:
        cfg = load_config(args.config)
        d = {
            "p01": cfg.p01, "p11": cfg.p11, "n_channels": cfg.n_channels,
            "L": cfg.L, "schedule": cfg.schedule, "horizon": cfg.horizon,
            "replicates": cfg.replicates, "seed": cfg.seed,
            "omega1": None if cfg.omega1 is None else list(cfg.omega1),
            "out_dir": cfg.out_dir, "checkpoint_ratio": cfg.checkpoint_ratio,
        }
    for key in ("p01", "p11", "n_channels", "L", "schedule", "horizon",
                "replicates", "seed", "omega1", "out_dir"):
        v = getattr(args, key, None)
        if v is not None:
            d[key] = v
    return d


def _cmd_simulate(args) -> int:
    config = config_from_dict(_build_config(args))
    paths = run_experiment(config)
    for name, p in paths.items():
        print(f"{name}: {p}")
    return 0


def _cmd_analyze(args) -> int:
    tm = TransitionMatrix(args.p01, args.p11)
    schedule = make_schedule(args.schedule)
    consts = bound_constants(tm, schedule, args.L, args.n_channels, method=args.c_method)
    doc = bound_constants_json(consts)
    doc["block_threshold"] = consts.block_threshold
    doc["schedule"] = schedule.name
    doc["method"] = args.c_method
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"analysis: {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify_bounds(args) -> int:
    rng = np.random.default_rng(args.seed)
    processes = args.processes or sorted(BUILTIN_PROCESSES)
    reports = []
    ok = True
    for name in processes:
        for n in args.n:
            for mult in args.a_mult:
                p = DriftBoundParams(n=n, a=mult * np.sqrt(n), mu=args.mu, C=args.drift, b=args.range_b)
                rep = empirical_tail_check(name, p, args.trials, rng)
                reports.append(rep)
                ok = ok and rep["pass"]
    doc = {"pass": ok, "reports": reports}
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"report: {args.out} (pass={ok})")
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def _cmd_sweep(args) -> int:
    base = _build_config(args)
    variants = []
    for sched in args.schedules:
        label = sched if isinstance(sched, str) else "affine_log"
        variants.append((f"schedule-{label}", {"schedule": sched}))
    for pair in args.p_pairs or []:
        p01, _, p11 = pair.partition(":")
        variants.append((f"p-{p01}-{p11}", {"p01": float(p01), "p11": float(p11)}))
    if not variants:
        print("nothing to sweep: pass --schedules and/or --p-pairs", file=sys.stderr)
        return 2
    root = Path(base.get("out_dir", "results"))
    for label, override in variants:
        d = dict(base)
        d.update(override)
        d["out_dir"] = str(root / label)
        config = config_from_dict(d)
        paths = run_experiment(config)
        print(f"{label}: {paths['regret_curve']}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="specsense", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a regret experiment and write CSV/JSON outputs")
    _add_config_overrides(p_sim)
    p_sim.set_defaults(fn=_cmd_simulate)

    p_an = sub.add_parser("analyze", help="compute steady-state and regret-bound constants")
    p_an.add_argument("--p01", type=float, required=True)
    p_an.add_argument("--p11", type=float, required=True)
    p_an.add_argument("--n-channels", type=int, dest="n_channels", default=2)
    p_an.add_argument("--schedule", type=_parse_schedule_arg, default="k1")
    p_an.add_argument("--L", type=float, dest="L", default=3.0)
    p_an.add_argument("--c-method", dest="c_method", default="truncated_series",
                      choices=["truncated_series", "closed_form_n2"])
    p_an.add_argument("--out", type=Path)
    p_an.set_defaults(fn=_cmd_analyze)

    p_vb = sub.add_parser("verify-bounds", help="empirical check of the drifting-mean tail bounds")
    p_vb.add_argument("--mu", type=float, default=0.5)
    p_vb.add_argument("--drift", type=float, default=0.1, help="drift bound C")
    p_vb.add_argument("--range-b", type=float, dest="range_b", default=1.0)
    p_vb.add_argument("--n", type=int, nargs="+", default=[10, 100, 1000])
    p_vb.add_argument("--a-mult", type=float, nargs="+", dest="a_mult", default=[0.5, 1.0, 2.0],
                      help="deviation a as multiples of sqrt(n)")
    p_vb.add_argument("--trials", type=int, default=100_000)
    p_vb.add_argument("--processes", nargs="+", choices=sorted(BUILTIN_PROCESSES))
    p_vb.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_vb.add_argument("--out", type=Path)
    p_vb.set_defaults(fn=_cmd_verify_bounds)

    p_sw = sub.add_parser("sweep", help="run simulate over a grid of schedules or transition laws")
    _add_config_overrides(p_sw)
    p_sw.add_argument("--schedules", type=_parse_schedule_arg, nargs="+", default=[])
    p_sw.add_argument("--p-pairs", dest="p_pairs", nargs="+",
                      help="transition pairs as p01:p11, e.g. 0.3:0.7 0.7:0.3")
    p_sw.set_defaults(fn=_cmd_sweep)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

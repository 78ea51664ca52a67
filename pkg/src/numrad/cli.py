"""Command-line entry point: ``numrad {eval,bounds,buzano,campaign,replay,dump}``."""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

import tomli

from . import bounds as B
from .buzano import MeanFunction
from .campaign import (
    MODULE_STREAM,
    config_with_overrides,
    dump_trial,
    load_trial,
    replay_trial,
    run_campaign,
)
from .config import MODULE_SUITES, BuzanoSettings, CampaignConfig, Tolerances, load_config
from .interchange import load_matrix
from .radius import numerical_radius
from .report import jsonable

BUZANO_PRESETS = ("gb", "cb", "thm21", "cor22", "cor24", "cor25", "cs")


def parse_complex(text: str) -> complex:
    """'RE' or 'RE,IM'."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise argparse.ArgumentTypeError(f"expected RE or RE,IM, got {text!r}")


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _emit(obj, stream=None) -> None:
    print(json.dumps(jsonable(obj), indent=2, allow_nan=True), file=stream or sys.stdout)


# --- subcommands --------------------------------------------------------------


def cmd_eval(args) -> int:
    enc = numerical_radius(load_matrix(args.input), tol=args.tol, grid_points=args.grid_points)
    _emit(enc.to_dict())
    return 0 if enc.certified else 3


def _toml_complex(v) -> complex:
    if isinstance(v, str):
        return parse_complex(v)
    if isinstance(v, list):
        return complex(v[0], v[1])
    return complex(v)


def _sweep_rows(path: Path, default_bound: str):
    """Cartesian product of the lists in a sweep file's [sweep] table."""
    with open(path, "rb") as fh:
        spec = tomli.load(fh).get("sweep", {})
    bound = spec.get("bound", default_bound)
    axes = {
        "n": spec.get("n", [2]),
        "alpha": [_toml_complex(v) for v in spec.get("alpha", [2.0])],
        "beta": [_toml_complex(v) for v in spec.get("beta", [2.0])],
        "gamma": [_toml_complex(v) for v in spec.get("gamma", [2.0])],
        "mean": spec.get("mean_choices", [{}]),
    }
    for combo in itertools.product(*axes.values()):
        yield bound, dict(zip(axes, combo))


def _mean_kwargs(m: dict) -> dict:
    return {
        "f1": MeanFunction.by_name(m.get("f1", "identity")),
        "xi1": float(m.get("xi1", 0.0)),
        "f2": MeanFunction.by_name(m.get("f2", "identity")),
        "xi2": float(m.get("xi2", 0.0)),
    }


def cmd_bounds(args) -> int:
    prof = B.ElementProfile(load_matrix(args.input), tol=args.tol)
    if args.sweep:
        reports = []
        for bound, row in _sweep_rows(Path(args.sweep), args.bound):
            reports += B.evaluate_bound(prof, bound, row["n"], row["alpha"], row["beta"], row["gamma"], **_mean_kwargs(row["mean"]))
        reports.sort(key=lambda r: (r.power, r.rhs))
    else:
        mean = {"f1": args.f1, "xi1": args.xi1, "f2": args.f2, "xi2": args.xi2}
        reports = B.evaluate_bound(prof, args.bound, args.n, args.alpha, args.beta, args.gamma, **_mean_kwargs(mean))
    out = [r.to_dict() | {"holds": r.holds(args.slack)} for r in reports]
    _emit(out)
    return 0 if all(r["holds"] for r in out) else 2


def cmd_buzano(args) -> int:
    annulus = (1e-3, 0.1) if args.small_alpha else (0.1, 10.0)
    cfg = CampaignConfig(
        seed=args.seed,
        suites=(args.preset,),
        buzano=BuzanoSettings(
            trials=args.trials,
            dims=args.dims,
            rows=args.rows,
            arity=args.arity,
            alpha_grid=() if args.small_alpha else BuzanoSettings.alpha_grid,
            annulus=annulus,
            state_kind=args.state,
        ),
        tolerances=Tolerances(buzano_slack=args.slack),
    )
    report = run_campaign(cfg, jobs=args.jobs)
    h = report.hashed
    _emit({"preset": args.preset, "seed": args.seed, "suite": h["suites"][args.preset],
           "violations": h["violations"], "sha256": report.sha256})  # fmt: skip
    return report.exit_code


def cmd_campaign(args) -> int:
    cfg = load_config(args.config)
    cfg = config_with_overrides(cfg, seed=args.seed, out=args.out)
    report = run_campaign(cfg, jobs=args.jobs)
    paths = report.write(cfg.output_dir)
    summary = {
        name: f"{s['passes']}/{s['trials']} passed, worst margin {s['worst_margin']}"
        for name, s in report.suites.items()
    }
    _emit(
        {
            "seed": cfg.seed,
            "suites": summary,
            "certification_failures": report.hashed["certification_failures"],
            "exit_status": report.exit_code,
            "sha256": report.sha256,
            "runtime_seconds": round(report.runtime_seconds, 2),
            "outputs": {k: str(v) for k, v in paths.items()},
        }
    )
    return report.exit_code


def cmd_replay(args) -> int:
    result = replay_trial(load_trial(args.trial))
    _emit(result)
    return 0 if result["reproduced"] else 1


def cmd_dump(args) -> int:
    cfg = load_config(args.config)
    stream = MODULE_STREAM if args.suite in MODULE_SUITES else args.stream
    record = dump_trial(cfg, stream, args.trial, args.suite, args.label)
    text = json.dumps(jsonable(record), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="numrad", description="Certified numerical radii and inequality campaigns.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="certified enclosure of v(a) for one matrix")
    e.add_argument("--input", required=True, help='matrix JSON {"dim", "re", "im"}')
    e.add_argument("--tol", type=float, default=1e-10)
    e.add_argument("--grid-points", type=int, default=None)
    e.set_defaults(func=cmd_eval)

    b = sub.add_parser("bounds", help="evaluate upper bounds for v(a)")
    b.add_argument("--input", required=True)
    b.add_argument("--bound", choices=B.BOUND_FAMILIES + ("all",), default="all")
    b.add_argument("--n", type=int, default=2, help="power for thm34/chain")
    b.add_argument("--alpha", type=parse_complex, default=complex(2.0))
    b.add_argument("--beta", type=parse_complex, default=complex(2.0))
    b.add_argument("--gamma", type=parse_complex, default=complex(2.0))
    b.add_argument("--f1", default="identity", choices=("identity", "affine_quarter"))
    b.add_argument("--xi1", type=float, default=0.0)
    b.add_argument("--f2", default="identity", choices=("identity", "affine_quarter"))
    b.add_argument("--xi2", type=float, default=0.0)
    b.add_argument("--tol", type=float, default=B.DEFAULT_TOL)
    b.add_argument("--slack", type=float, default=1e-9)
    b.add_argument("--sweep", help="TOML file with a [sweep] table of parameter lists")
    b.set_defaults(func=cmd_bounds)

    z = sub.add_parser("buzano", help="random Buzano-type instances for one inequality")
    z.add_argument("--preset", choices=BUZANO_PRESETS, required=True)
    z.add_argument("--trials", type=int, default=10_000)
    z.add_argument("--seed", type=int, default=42)
    z.add_argument("--dims", type=parse_int_list, default=(1, 2, 3, 4))
    z.add_argument("--rows", type=parse_int_list, default=(1, 2, 3, 4))
    z.add_argument("--arity", type=parse_int_list, default=(2, 3, 4, 5))
    z.add_argument("--state", choices=("hilbert_schmidt", "pure"), default="hilbert_schmidt")
    z.add_argument("--small-alpha", action="store_true", help="stress preset: |alpha| in [1e-3, 0.1]")
    z.add_argument("--slack", type=float, default=1e-10)
    z.add_argument("--jobs", type=int, default=None)
    z.set_defaults(func=cmd_buzano)

    c = sub.add_parser("campaign", help="run a full campaign from a TOML config")
    c.add_argument("--config", required=True)
    c.add_argument("--seed", type=int, default=None)
    c.add_argument("--jobs", type=int, default=None, help="worker processes (fallback: NUMRAD_JOBS, then 1)")
    c.add_argument("--out", default=None, help="report directory (overrides output_dir)")
    c.set_defaults(func=cmd_campaign)

    r = sub.add_parser("replay", help="re-run one dumped trial")
    r.add_argument("--trial", required=True)
    r.set_defaults(func=cmd_replay)

    d = sub.add_parser("dump", help="write a replayable record for one trial")
    d.add_argument("--config", required=True)
    d.add_argument("--suite", required=True)
    d.add_argument("--stream", type=int, default=0, help="ensemble index (ignored for module suites)")
    d.add_argument("--trial", type=int, required=True)
    d.add_argument("--label", default=None)
    d.add_argument("--out", default=None)
    d.set_defaults(func=cmd_dump)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

"""Randomized verification campaigns: run every selected suite over seeded ensembles.

Work is split into chunks of trials.  Each trial owns a counter-based random
stream, chunks are merged in a fixed order, and nothing that depends on the
worker count or wall clock enters the hashed section of the report, so
identical configs give byte-identical hashed output.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bounds as B
from .buzano import (
    BuzanoInstance,
    MeanFunction,
    buzano_alpha_sides,
    buzano_sides,
    eta_family_sides,
    product_buzano_alpha_sides,
    product_buzano_squared_sides,
    zeta_family_sides,
)
from .config import CampaignConfig, config_from_dict, config_to_dict
from .ensembles import EnsembleSpec, sample_alpha, sample_element, sample_module_tuple, sample_state, trial_rng
from .interchange import matrix_to_json, state_to_json
from .radius import check_norm_sandwich, sandwich_holds, spectral_corollary_probe
from .report import jsonable
from .states import abs_square_module, cauchy_schwarz_gap, positive_value

SCHEMA_VERSION = "1.0"
HIST_BUCKETS = 20
# stream id for module-tuple trials; ensemble streams are their indices 0, 1, ...
MODULE_STREAM = 2**32
MAX_LISTED_VIOLATIONS = 1000

EXIT_CLEAN, EXIT_VIOLATIONS, EXIT_UNCERTIFIED = 0, 2, 3

# suites whose reports enter the sharpness leaderboard
BOARD_SUITES = {"thm34", "chain", "thm31", "thm32", "thm33", "presets"}


@dataclass
class Check:
    suite: str
    label: str
    passed: bool
    margin: float
    tightness: float
    payload: object = None
    power: int = 0


def fmt_scalar(c) -> str:
    c = complex(c)
    return f"{c.real:g}" if c.imag == 0 else f"{c.real:g}{c.imag:+g}i"


def mean_function(name: str) -> MeanFunction:
    return MeanFunction.by_name(name)


# --- element suites -----------------------------------------------------------


def radius_keys_for(cfg: CampaignConfig) -> list:
    suites = set(cfg.element_suites)
    keys = {1}
    if suites & {"power", "thm34", "dominance"}:
        keys.update(range(2, max(cfg.parameters.powers) + 1))
    if suites & {"thm31", "thm33", "presets", "dominance"}:
        keys.add(3)
    out = sorted(keys)
    if suites & {"thm32", "equality_probes"}:
        out += [B.STAR_LEFT, B.STAR_RIGHT]
    return out


def _bound_check(suite, label, report, slack) -> Check:
    return Check(suite, label, report.holds(slack), report.margin, report.tightness, report, report.power)


def _predicate_check(suite, label, pred) -> Check:
    return Check(suite, label, pred.holds, pred.margin, pred.ratio, pred)


def element_checks(prof: B.ElementProfile, cfg: CampaignConfig) -> list[Check]:
    """Every selected element suite evaluated on one profiled element."""
    suites = set(cfg.element_suites)
    tol, par = cfg.tolerances, cfg.parameters
    slack = tol.bound_slack
    out: list[Check] = []
    if "sandwich" in suites:
        r = check_norm_sandwich(prof.a, rel_slack=slack, enclosure=prof.radius(1))
        out.append(Check("sandwich", "sandwich", sandwich_holds(r), r.margin, r.components["ratio"], r, 1))
    if "power" in suites:
        for k in par.powers:
            r = B.power_inequality(prof, k, tol.power_slack)
            out.append(Check("power", f"power[k={k}]", r.margin >= -r.params["slack"], r.margin, r.tightness, r, k))
    thm34 = {}
    if "thm34" in suites or "dominance" in suites:
        thm34 = {n: B.power_sum_bound(prof, n) for n in par.powers}
    if "thm34" in suites:
        out += [_bound_check("thm34", f"thm34[n={n}]", r, slack) for n, r in thm34.items()]
    if "chain" in suites:
        out += [_bound_check("chain", f"chain[n={n}]", B.geometric_norm_bound(prof, n), slack) for n in par.powers]
    if "thm31" in suites:
        for s in par.scalars:
            out.append(_bound_check("thm31", f"thm31[a=b={fmt_scalar(s)}]", B.cubic_bound(prof, s, s), slack))
    if "thm32" in suites:
        for s in par.scalars:
            out.append(_bound_check("thm32", f"thm32[a={fmt_scalar(s)}]", B.cubic_min_bound(prof, s), slack))
    if "thm33" in suites:
        for m in par.mean_choices:
            f1, f2 = m.functions()
            for s in par.scalars:
                r = B.sextic_bound(prof, f1, m.xi1, f2, m.xi2, s, s, s)
                out.append(_bound_check("thm33", f"thm33[{m.label};a=b=c={fmt_scalar(s)}]", r, slack))
    presets = []
    if "presets" in suites or "dominance" in suites:
        presets = B.cubic_presets(prof) + [B.sextic_preset(prof)]
    if "presets" in suites:
        out += [_bound_check("presets", r.bound_id, r, slack) for r in presets]
    if "dominance" in suites:
        dominated = [(f"thm34[n={n}]", r) for n, r in thm34.items()]
        dominated += [(r.bound_id, r) for r in presets if r.bound_id in ("c311", "thm33_preset")]
        for label, r in dominated:
            out.append(_predicate_check("dominance", f"dominance[{label}]", B.dominance_check(r, prof, slack)))
    if "equality_probes" in suites:
        out.append(_predicate_check("equality_probes", "thm32_equality", B.cubic_equality_probe(prof)))
    if "spectral_corollary" in suites:
        out.append(_predicate_check("spectral_corollary", "spectral_corollary", spectral_corollary_probe(prof.a, prof.radius(1))))
    return out


def sample_profiles(cfg: CampaignConfig, ens_index: int, trials) -> list[B.ElementProfile]:
    """Draw and profile the given trials; identical draws share one profile."""
    spec = cfg.ensembles[ens_index]
    seen: dict[bytes, B.ElementProfile] = {}
    profs = []
    for t in trials:
        a = sample_element(spec, trial_rng(cfg.seed, ens_index, t))
        key = a.tobytes()
        if key not in seen:
            seen[key] = B.ElementProfile(a, tol=cfg.tolerances.solver_tol, grid_points=cfg.tolerances.grid_points)
        profs.append(seen[key])
    B.prefetch_radii(list(seen.values()), radius_keys_for(cfg))
    return profs


# --- module suites ------------------------------------------------------------


@dataclass
class ModuleTrial:
    phi: object
    xs: list
    z: np.ndarray
    alpha: complex
    f_name: str
    xi: float
    zeta: float
    eta: float


def sample_module_trial(cfg: CampaignConfig, trial: int) -> ModuleTrial:
    s = cfg.buzano
    rng = trial_rng(cfg.seed, MODULE_STREAM, trial)
    n = int(s.dims[rng.integers(len(s.dims))])
    m = int(s.rows[rng.integers(len(s.rows))])
    k = int(s.arity[rng.integers(len(s.arity))])
    phi = sample_state(n, rng, s.state_kind)
    xs, z = sample_module_tuple(n, m, k, phi, rng)
    alpha = sample_alpha(rng, s.alpha_grid, s.annulus)
    f_name = "identity" if rng.random() < 0.5 else "affine_quarter"
    lo, hi = mean_function(f_name).domain
    xi = float(rng.uniform(max(lo, 1.0 - hi), min(hi, 1.0 - lo)))
    if rng.random() < 0.2:
        zeta = float((0.0, 1e6)[rng.integers(2)])
    else:
        zeta = float(np.exp(rng.uniform(np.log(1e-3), np.log(1e3))))
    eta = float(rng.uniform(-0.5, 1.5))
    return ModuleTrial(phi, xs, z, alpha, f_name, xi, zeta, eta)


def _sides_check(suite, lhs, rhs, slack, params) -> Check:
    passed = lhs <= rhs + slack * max(1.0, rhs)
    tight = lhs / rhs if rhs > 0 else (1.0 if lhs <= 0 else math.inf)
    return Check(suite, suite, passed, rhs - lhs, tight, {"lhs": lhs, "rhs": rhs, **params})


def module_checks(mt: ModuleTrial, cfg: CampaignConfig) -> list[Check]:
    suites = set(cfg.module_suites)
    slack = cfg.tolerances.buzano_slack
    phi, xs, z, alpha = mt.phi, mt.xs, mt.z, mt.alpha
    x, y = xs[0], xs[1]
    out = []
    if "cs" in suites:
        gap = cauchy_schwarz_gap(phi, x, y)
        scale = math.sqrt(positive_value(phi, abs_square_module(x)) * positive_value(phi, abs_square_module(y)))
        tight = (scale - gap) / scale if scale > 0 else 1.0
        out.append(Check("cs", "cs", gap >= -cfg.tolerances.cs_slack * scale, gap, tight, {"gap": gap, "scale": scale}))
    if "gb" in suites:
        out.append(_sides_check("gb", *buzano_alpha_sides(phi, x, y, z, alpha), slack, {"alpha": alpha}))
    if "cb" in suites:
        out.append(_sides_check("cb", *buzano_sides(phi, x, y, z), slack, {}))
    if "thm21" in suites:
        inst = BuzanoInstance(phi, tuple(xs), z, alpha, mt.xi, mean_function(mt.f_name))
        lhs, rhs, terms = product_buzano_squared_sides(inst)
        out.append(_sides_check("thm21", lhs, rhs, slack, {"alpha": alpha, "f": mt.f_name, "xi": mt.xi, "terms": terms}))
    if "cor22" in suites:
        out.append(_sides_check("cor22", *product_buzano_alpha_sides(phi, xs, z, alpha), slack, {"alpha": alpha}))
    if "cor24" in suites:
        sides = zeta_family_sides(phi, xs, z, mt.zeta, alpha)
        out.append(_sides_check("cor24", *sides, slack, {"alpha": alpha, "zeta": mt.zeta}))
    if "cor25" in suites:
        sides = eta_family_sides(phi, xs, z, mt.eta, alpha)
        out.append(_sides_check("cor25", *sides, slack, {"alpha": alpha, "eta": mt.eta}))
    return out


# --- chunk execution and merging ----------------------------------------------


@dataclass
class SuiteAccumulator:
    trials: int = 0
    passes: int = 0
    worst_margin: float = math.inf
    histogram: list = field(default_factory=lambda: [0] * HIST_BUCKETS)

    def add(self, c: Check):
        self.trials += 1
        self.passes += bool(c.passed)
        if c.margin < self.worst_margin:
            self.worst_margin = c.margin
        t = c.tightness
        b = HIST_BUCKETS - 1 if not t < 1.0 else max(0, int(t * HIST_BUCKETS))
        self.histogram[b] += 1

    def merge(self, other: SuiteAccumulator):
        self.trials += other.trials
        self.passes += other.passes
        self.worst_margin = min(self.worst_margin, other.worst_margin)
        self.histogram = [a + b for a, b in zip(self.histogram, other.histogram)]

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "passes": self.passes,
            "violations": self.trials - self.passes,
            "worst_margin": self.worst_margin if self.trials else None,
            "histogram": self.histogram,
        }


@dataclass
class ChunkResult:
    suites: dict = field(default_factory=dict)
    board: dict = field(default_factory=dict)  # (ensemble label, bound label) -> tightness list
    violations: list = field(default_factory=list)
    uncertified: list = field(default_factory=list)

    def add(self, c: Check):
        self.suites.setdefault(c.suite, SuiteAccumulator()).add(c)

    def merge(self, other: ChunkResult):
        for name, acc in other.suites.items():
            self.suites.setdefault(name, SuiteAccumulator()).merge(acc)
        for key, vals in other.board.items():
            self.board.setdefault(key, []).extend(vals)
        self.violations.extend(other.violations)
        self.uncertified.extend(other.uncertified)


def _trial_header(cfg, kind, stream, trial, **extra) -> dict:
    return {"kind": kind, "seed": cfg.seed, "stream": stream, "trial": trial, "config": config_to_dict(cfg, False), **extra}


def _payload_dict(p):
    return p.to_dict() if hasattr(p, "to_dict") else jsonable(p)


def run_element_chunk(cfg: CampaignConfig, ens_index: int, start: int, stop: int) -> ChunkResult:
    spec = cfg.ensembles[ens_index]
    res = ChunkResult()
    profs = sample_profiles(cfg, ens_index, range(start, stop))
    for t, prof in zip(range(start, stop), profs):
        powers = set()
        for c in element_checks(prof, cfg):
            res.add(c)
            if c.suite in BOARD_SUITES:
                res.board.setdefault((spec.label, c.label), []).append(c.tightness)
                powers.add(c.power)
            if not c.passed:
                res.violations.append(
                    _trial_header(cfg, "element", ens_index, t, ensemble=spec.label, suite=c.suite, label=c.label,
                                  margin=c.margin, report=_payload_dict(c.payload), matrix=matrix_to_json(prof.a))
                )  # fmt: skip
        v, norm = prof.v_upper(1), prof.norm
        for p in sorted(powers):
            res.board.setdefault((spec.label, f"trivial[p={p}]"), []).append((v / norm) ** p if norm > 0 else 1.0)
        for key, enc in prof._radii.items():
            if not enc.certified:
                res.uncertified.append({"ensemble": spec.label, "trial": t, "key": str(key), "width": enc.width})
    return res


def run_module_chunk(cfg: CampaignConfig, start: int, stop: int) -> ChunkResult:
    res = ChunkResult()
    for t in range(start, stop):
        mt = sample_module_trial(cfg, t)
        for c in module_checks(mt, cfg):
            res.add(c)
            if not c.passed:
                res.violations.append(
                    _trial_header(cfg, "module", MODULE_STREAM, t, suite=c.suite, label=c.label, margin=c.margin,
                                  report=jsonable(c.payload), state=state_to_json(mt.phi))
                )  # fmt: skip
    return res


def _run_task(args) -> ChunkResult:
    cfg, task = args
    if task[0] == "element":
        return run_element_chunk(cfg, *task[1:])
    return run_module_chunk(cfg, *task[1:])


def plan_tasks(cfg: CampaignConfig) -> list[tuple]:
    tasks = []
    if cfg.element_suites:
        for i, spec in enumerate(cfg.ensembles):
            for s in range(0, spec.count, cfg.chunk_size):
                tasks.append(("element", i, s, min(s + cfg.chunk_size, spec.count)))
    if cfg.module_suites:
        for s in range(0, cfg.buzano.trials, cfg.chunk_size):
            tasks.append(("module", s, min(s + cfg.chunk_size, cfg.buzano.trials)))
    return tasks


def resolve_jobs(jobs: int | None) -> int:
    if jobs is None:
        jobs = int(os.environ.get("NUMRAD_JOBS", "1") or 1)
    return max(1, jobs)


# --- report -------------------------------------------------------------------


@dataclass
class CampaignReport:
    hashed: dict
    runtime_seconds: float = 0.0
    jobs: int = 1

    @property
    def sha256(self) -> str:
        return hashlib.sha256(canonical_json(self.hashed).encode()).hexdigest()

    @property
    def exit_code(self) -> int:
        return self.hashed["exit_status"]

    @property
    def suites(self) -> dict:
        return self.hashed["suites"]

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "hashed": self.hashed,
            "sha256": self.sha256,
            "runtime_seconds": self.runtime_seconds,
            "jobs": self.jobs,
        }

    def write(self, out_dir) -> dict[str, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "json": out / "report.json",
            "suites": out / "suites.csv",
            "leaderboard": out / "leaderboard.csv",
            "violations": out / "violations.csv",
        }
        paths["json"].write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")
        with open(paths["suites"], "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["suite", "trials", "passes", "violations", "worst_margin"])
            for name, s in self.suites.items():
                w.writerow([name, s["trials"], s["passes"], s["violations"], s["worst_margin"]])
        with open(paths["leaderboard"], "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["ensemble", "rank", "bound", "median_tightness", "samples"])
            for ens, rows in self.hashed["leaderboard"].items():
                for r in rows:
                    w.writerow([ens, r["rank"], r["bound"], r["median_tightness"], r["samples"]])
        with open(paths["violations"], "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["suite", "label", "stream", "trial", "margin"])
            for v in self.hashed["violations"]:
                w.writerow([v["suite"], v["label"], v["stream"], v["trial"], v["margin"]])
        return paths


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def _finite(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


def _scrub(obj):
    if isinstance(obj, dict):
        return {k: _scrub(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_scrub(v) for v in obj]
    return _finite(obj)


def build_leaderboard(board: dict) -> dict:
    per_ens: dict[str, list] = {}
    for (ens, label), vals in board.items():
        per_ens.setdefault(ens, []).append((label, float(np.median(vals)), len(vals)))
    out = {}
    for ens in sorted(per_ens):
        rows = sorted(per_ens[ens], key=lambda r: (-r[1], r[0]))
        out[ens] = [{"rank": i + 1, "bound": lab, "median_tightness": med, "samples": n} for i, (lab, med, n) in enumerate(rows)]
    return out


def assemble_report(cfg: CampaignConfig, merged: ChunkResult) -> dict:
    suites = {name: merged.suites[name].to_dict() for name in cfg.suites if name in merged.suites}
    n_viol = sum(s["violations"] for s in suites.values())
    exit_status = EXIT_VIOLATIONS if n_viol else (EXIT_UNCERTIFIED if merged.uncertified else EXIT_CLEAN)
    return _scrub(
        jsonable(
            {
                "schema_version": SCHEMA_VERSION,
                "seed": cfg.seed,
                "config": cfg.echo(),
                "suites": suites,
                "leaderboard": build_leaderboard(merged.board),
                "violation_count": n_viol,
                "violations": merged.violations[:MAX_LISTED_VIOLATIONS],
                "certification_failures": len(merged.uncertified),
                "uncertified": merged.uncertified[:MAX_LISTED_VIOLATIONS],
                "exit_status": exit_status,
            }
        )
    )


def run_campaign(cfg: CampaignConfig, jobs: int | None = None) -> CampaignReport:
    """Execute all selected suites; deterministic in ``cfg`` whatever ``jobs`` is."""
    jobs = resolve_jobs(jobs)
    t0 = time.perf_counter()
    tasks = [(cfg, t) for t in plan_tasks(cfg)]
    merged = ChunkResult()
    if jobs == 1:
        for task in tasks:
            merged.merge(_run_task(task))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_run_task, tasks, chunksize=1):
                merged.merge(part)
    hashed = assemble_report(cfg, merged)
    return CampaignReport(hashed, runtime_seconds=time.perf_counter() - t0, jobs=jobs)


def tightness_leaderboard(report: CampaignReport | dict) -> list[dict]:
    """Flat table: per ensemble, bounds ranked by median tightness (trivial baseline included)."""
    hashed = report.hashed if isinstance(report, CampaignReport) else report.get("hashed", report)
    if not hashed.get("suites"):
        raise ValueError("no suites ran; nothing to rank")
    board = hashed["leaderboard"]
    if not board:
        raise ValueError("no bound suites ran; the leaderboard is empty")
    return [{"ensemble": ens, **row} for ens, rows in board.items() for row in rows]


# --- replay -------------------------------------------------------------------


def dump_trial(cfg: CampaignConfig, stream: int, trial: int, suite: str, label: str | None = None) -> dict:
    """A replayable trial record (the same shape as a violation entry)."""
    cfg_one = config_from_dict({**config_to_dict(cfg, False), "suites": [suite]})
    checks = _trial_checks(cfg_one, stream, trial)
    c = next(c for c in checks if label is None or c.label == label)
    extra = {"suite": suite, "label": c.label, "margin": c.margin}
    if stream == MODULE_STREAM:
        return _trial_header(cfg, "module", stream, trial, **extra)
    a = sample_element(cfg.ensembles[stream], trial_rng(cfg.seed, stream, trial))
    return _trial_header(cfg, "element", stream, trial, ensemble=cfg.ensembles[stream].label, matrix=matrix_to_json(a), **extra)


def _trial_checks(cfg: CampaignConfig, stream: int, trial: int) -> list[Check]:
    if stream == MODULE_STREAM:
        return module_checks(sample_module_trial(cfg, trial), cfg)
    (prof,) = sample_profiles(cfg, stream, [trial])
    return element_checks(prof, cfg)


def replay_trial(record: dict) -> dict:
    """Regenerate a dumped trial from its seed and indices and re-evaluate the recorded check."""
    data = dict(record["config"])
    data.update(seed=record["seed"], suites=[record["suite"]])
    cfg = config_from_dict(data)
    checks = _trial_checks(cfg, int(record["stream"]), int(record["trial"]))
    c = next(c for c in checks if c.label == record["label"])
    return {
        "suite": c.suite,
        "label": c.label,
        "passed": bool(c.passed),
        "margin": c.margin,
        "recorded_margin": record.get("margin"),
        "reproduced": record.get("margin") is None or c.margin == record["margin"],
        "report": _scrub(_payload_dict(c.payload)),
    }


def load_trial(path) -> dict:
    return json.loads(Path(path).read_text())


def config_with_overrides(cfg: CampaignConfig, seed=None, out=None) -> CampaignConfig:
    data = config_to_dict(cfg)
    if seed is not None:
        data["seed"] = seed
    if out is not None:
        data["output_dir"] = str(out)
    return config_from_dict(data)


__all__ = [
    "Check",
    "CampaignReport",
    "EnsembleSpec",
    "run_campaign",
    "tightness_leaderboard",
    "replay_trial",
    "dump_trial",
]

"""Acceptance criteria, each at its stated tolerance; one pass/fail line per criterion.

Criteria 4, 6 and 10 share two full runs of the default campaign (seed 42),
which together take several minutes.
"""

import time
from pathlib import Path

import numpy as np
import pytest

from numrad.algebra import identity, operator_norm, spectral_radius
from numrad.bounds import (
    ElementProfile,
    cubic_bound,
    cubic_equality_probe,
    cubic_min_bound,
    cubic_presets,
    power_sum_bound,
    prefetch_radii,
    radius_keys,
    sextic_bound,
    sextic_preset,
)
from numrad.buzano import (
    BuzanoInstance,
    MeanFunction,
    eta_family_instance,
    eta_family_sides,
    product_buzano_squared_sides,
    zeta_family_instance,
    zeta_family_sides,
)
from numrad.campaign import run_campaign, sample_module_trial
from numrad.config import MODULE_SUITES, config_from_dict, load_config
from numrad.ensembles import EnsembleSpec, haar_unitary, sample_element, trial_rng
from numrad.radius import numerical_radii, numerical_radius

from .conftest import ACCEPTANCE_LINES

ROOT = Path(__file__).resolve().parents[1]
BOUND_SUITES = ("thm34", "chain", "thm31", "thm32", "thm33", "presets")
SOUNDNESS_KINDS = ("ginibre", "normal_random", "haar_unitary", "two_nilpotent", "jordan_nilpotent")


def record(n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES[n] = line
    print(line)
    assert ok, line


def draws(kind, count, dims, seed):
    out = []
    for t in range(count):
        rng = trial_rng(seed, 0, t)
        n = int(dims[t % len(dims)])
        out.append(sample_element(EnsembleSpec(kind, n), rng))
    return out


def reldiff(x, y):
    scale = max(abs(x), abs(y))
    return abs(x - y) / scale if scale > 0 else 0.0


@pytest.fixture(scope="module")
def default_runs():
    cfg = load_config(ROOT / "configs" / "default.toml")
    assert cfg.seed == 42
    return cfg, run_campaign(cfg, jobs=1), run_campaign(cfg, jobs=1)


def test_criterion_01_sandwich_sharpness():
    t0 = time.perf_counter()
    nil = draws("two_nilpotent", 1000, (2, 3, 4, 5, 6), seed=101)
    nor = draws("normal_random", 1000, (2, 3, 4, 5, 6), seed=102)
    worst_nil = max(abs(e.midpoint / operator_norm(a) - 0.5) for a, e in zip(nil, numerical_radii(nil)))
    worst_nor = max(abs(e.midpoint / operator_norm(a) - 1.0) for a, e in zip(nor, numerical_radii(nor)))
    dt = time.perf_counter() - t0
    ok = worst_nil <= 1e-7 and worst_nor <= 1e-7 and dt <= 30
    record(1, ok, f"2-nilpotent |v/||a|| - 1/2| <= {worst_nil:.1e}, normal |v/||a|| - 1| <= {worst_nor:.1e}, {dt:.1f}s")


def test_criterion_02_buzano_suites():
    cfg = config_from_dict(
        {"seed": 42, "suites": list(MODULE_SUITES), "ensembles": [{"kind": "ginibre", "dims": [2], "count": 1}],
         "buzano": {"trials": 10_000}}
    )  # fmt: skip
    b = cfg.buzano
    assert (b.dims, b.rows, b.arity) == ((1, 2, 3, 4), (1, 2, 3, 4), (2, 3, 4, 5))
    assert cfg.tolerances.buzano_slack == 1e-10
    t0 = time.perf_counter()
    rep = run_campaign(cfg, jobs=1)
    dt = time.perf_counter() - t0
    counts = {s: rep.suites[s]["trials"] for s in MODULE_SUITES}
    viol = sum(rep.suites[s]["violations"] for s in MODULE_SUITES)
    ok = min(counts.values()) >= 10_000 and viol == 0 and dt <= 60
    record(2, ok, f"{len(MODULE_SUITES)} suites x >= {min(counts.values())} instances, {viol} violations, {dt:.1f}s")


def test_criterion_03_substitution_consistency():
    cfg = config_from_dict({"seed": 7, "suites": ["cor24"], "ensembles": [{"kind": "ginibre", "dims": [2], "count": 1}]})
    worst = {"cor24": 0.0, "cor25": 0.0, "c311": 0.0, "thm33_preset": 0.0}
    for t in range(1000):
        mt = sample_module_trial(cfg, t)
        _, rhs = zeta_family_sides(mt.phi, mt.xs, mt.z, mt.zeta, mt.alpha)
        _, rhs2, _ = product_buzano_squared_sides(zeta_family_instance(mt.phi, mt.xs, mt.z, mt.zeta, mt.alpha))
        worst["cor24"] = max(worst["cor24"], reldiff(rhs, rhs2))
        _, rhs = eta_family_sides(mt.phi, mt.xs, mt.z, mt.eta, mt.alpha)
        _, rhs2, _ = product_buzano_squared_sides(eta_family_instance(mt.phi, mt.xs, mt.z, mt.eta, mt.alpha))
        worst["cor25"] = max(worst["cor25"], reldiff(rhs, rhs2))
    f = MeanFunction.identity()
    for t in range(1000):
        rng = trial_rng(8, 0, t)
        kind = SOUNDNESS_KINDS[t % len(SOUNDNESS_KINDS)]
        a = sample_element(EnsembleSpec(kind, int(rng.integers(2, 7)), normalize=bool(t % 2)), rng)
        prof = ElementProfile(a)
        worst["c311"] = max(worst["c311"], reldiff(cubic_presets(prof)[0].rhs, cubic_bound(prof, 2, 2).rhs))
        worst["thm33_preset"] = max(
            worst["thm33_preset"], reldiff(sextic_preset(prof).rhs, sextic_bound(prof, f, 0.0, f, 0.0, 2, 2, 2).rhs)
        )
    ok = max(worst.values()) <= 1e-14
    record(3, ok, "max relative disagreement " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_criterion_04_bound_soundness(default_runs):
    cfg, rep, _ = default_runs
    assert cfg.tolerances.solver_tol == 1e-11 and cfg.tolerances.bound_slack == 1e-9
    assert len(cfg.parameters.scalars) == 6 and tuple(cfg.parameters.powers) == (2, 3, 4, 5, 6)
    per_kind = {}
    for e in cfg.ensembles:
        per_kind[e.kind] = per_kind.get(e.kind, 0) + e.count
    viol = {s: rep.suites[s]["violations"] for s in BOUND_SUITES}
    ok = (
        set(SOUNDNESS_KINDS) <= set(per_kind)
        and min(per_kind.values()) >= 10_000
        and sum(viol.values()) == 0
        and rep.hashed["certification_failures"] == 0
    )
    checks = sum(rep.suites[s]["trials"] for s in BOUND_SUITES)
    record(4, ok, f"{checks} bound evaluations over {len(per_kind)} ensembles x {min(per_kind.values())} trials, "
                  f"{sum(viol.values())} violations")  # fmt: skip


def test_criterion_05_equality_cases():
    elements = [identity(n) for n in (1, 2, 3, 5, 8)]
    elements += [haar_unitary(n, trial_rng(5, 0, n)) for n in (1, 2, 3, 4, 6)]
    worst = 0.0
    for a in elements:
        prof = ElementProfile(a)
        prefetch_radii([prof], radius_keys(8))
        reports = [power_sum_bound(prof, n) for n in range(2, 9)]
        reports += [cubic_presets(prof)[0], cubic_min_bound(prof, 2.0), sextic_preset(prof)]
        worst = max(worst, max(abs(r.tightness - 1.0) for r in reports))
    preset_rhs = sextic_preset(identity(3)).rhs
    ok = worst <= 1e-9 and abs(preset_rhs - 1.0) <= 1e-9
    record(5, ok, f"max |tightness - 1| = {worst:.1e} over identities and Haar unitaries; sextic preset rhs(I) = {preset_rhs!r}")


def test_criterion_06_dominance(default_runs):
    cfg, rep, _ = default_runs
    s = rep.suites["dominance"]
    expected = sum(e.count for e in cfg.ensembles) * (len(cfg.parameters.powers) + 2)
    ok = s["violations"] == 0 and s["trials"] == expected and s["passes"] == s["trials"]
    record(6, ok, f"rhs <= ||a||^p (1 + 1e-9) on {s['passes']}/{s['trials']} campaign samples")


def test_criterion_07_radius_equals_spectral_radius():
    worst = 0.0
    for kind, seed in (("normal_random", 201), ("haar_unitary", 202)):
        mats = draws(kind, 1000, (1, 2, 3, 4, 5, 6), seed)
        for a, e in zip(mats, numerical_radii(mats)):
            worst = max(worst, abs(e.midpoint - spectral_radius(a)) / operator_norm(a))
    record(7, worst <= 1e-6, f"max |v - r| / ||a|| = {worst:.1e} on 2000 normal/unitary draws")


def test_criterion_08_cubic_equality_probe():
    mats = draws("normal_random", 1000, (1, 2, 3, 4, 5, 6), seed=301)
    profs = [ElementProfile(a) for a in mats]
    prefetch_radii(profs, [1, "a*a^2", "a^2a*"])
    probes = [cubic_equality_probe(p, rtol=1e-6) for p in profs]
    worst = max(p.ratio for p in probes)
    ok = all(p.applicable and p.holds for p in probes) and worst <= 1e-6
    record(8, ok, f"v(a*a^2), v(a^2a*) match ||a||^3 within {worst:.1e} relative on 1000 normal draws")


def test_criterion_09_solver_certification(radius_oracles):
    t0 = time.perf_counter()
    kinds = ("ginibre", "normal_random", "haar_unitary", "two_nilpotent", "jordan_nilpotent", "gue_hermitian")
    mats = []
    for t in range(10_000):
        rng = trial_rng(9, 0, t)
        kind = kinds[t % len(kinds)]
        n = int(rng.integers(2 if kind == "two_nilpotent" else 1, 17))
        mats.append(sample_element(EnsembleSpec(kind, n, normalize=False), rng) * 10 ** rng.uniform(-3, 3))
    encs = numerical_radii(mats, tol=1e-11)
    rel = [e.width / max(1.0, operator_norm(a)) for a, e in zip(mats, encs)]
    a3, case = radius_oracles["jordan3"]
    j3 = numerical_radius(a3, tol=1e-11)
    dt = time.perf_counter() - t0
    oracle_err = abs(j3.midpoint - case["value"])
    ok = max(rel) <= 1e-10 and all(e.certified for e in encs) and oracle_err <= 1e-8 and dt <= 120
    record(9, ok, f"max width / max(1, ||a||) = {max(rel):.1e} on 10^4 matrices (n <= 16); "
                  f"Jordan-3 {j3.midpoint:.15f} vs oracle {case['value']:.15f}; {dt:.1f}s")  # fmt: skip


def test_criterion_10_determinism(default_runs):
    _, first, second = default_runs
    ok = first.sha256 == second.sha256 and first.hashed == second.hashed
    record(10, ok, f"two seed-42 default campaigns: sha256 {first.sha256[:16]}... vs {second.sha256[:16]}...")

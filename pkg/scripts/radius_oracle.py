#!/usr/bin/env python3
"""Independent numerical-radius oracle; freezes expected values for the tests.

Two methods that share no code with the package solver:

* a dense theta grid of lambda_max(Re(e^{i theta} a)) (N = 10^6 by default),
  evaluated with plain numpy in blocks;
* direct maximization of |x* a x| over unit vectors x (BFGS from many random
  starts, real parametrization of C^n).

The oracle value is the larger of the two (both are lower bounds of v(a));
the grid also yields the rigorous upper bound grid_max + ||a|| pi / N.
"""

import argparse
import json
from pathlib import Path

import numpy as np
from scipy.optimize import minimize


def dense_grid(a, n_points, block=50_000):
    herm = 0.5 * (a + a.conj().T)
    skew = (a - a.conj().T) / 2j
    best, best_theta = -np.inf, 0.0
    for start in range(0, n_points, block):
        th = 2 * np.pi * np.arange(start, min(start + block, n_points)) / n_points
        h = np.cos(th)[:, None, None] * herm - np.sin(th)[:, None, None] * skew
        vals = np.linalg.eigvalsh(h)[:, -1]
        k = int(np.argmax(vals))
        if vals[k] > best:
            best, best_theta = float(vals[k]), float(th[k])
    return best, best_theta


def rayleigh_max(a, starts=40, seed=0):
    n = a.shape[0]
    rng = np.random.default_rng(seed)

    def neg(p):
        x = p[:n] + 1j * p[n:]
        nx = np.vdot(x, x).real
        return -abs(np.vdot(x, a @ x)) / nx

    best = 0.0
    for _ in range(starts):
        res = minimize(neg, rng.standard_normal(2 * n), method="BFGS", options={"gtol": 1e-13})
        best = max(best, -res.fun)
    return float(best)


def oracle(a, n_points):
    a = np.asarray(a, dtype=complex)
    g, theta = dense_grid(a, n_points)
    r = rayleigh_max(a)
    norm = float(np.linalg.norm(a, 2))
    return {
        "grid_max": g,
        "grid_theta": theta,
        "grid_upper": g + norm * np.pi / n_points,
        "rayleigh_max": r,
        "value": max(g, r),
    }


def golden_matrices(seed=20240611):
    rng = np.random.default_rng(seed)
    mats = {
        "jordan3": np.eye(3, k=1),
        "jordan4": np.eye(4, k=1),
        "two_nilpotent_2x2_scaled": np.array([[0, 2], [0, 0]]),
        "diag_3_minus4i": np.diag([3, -4j]),
    }
    for n in (2, 3, 4, 5, 6):
        mats[f"ginibre_{n}"] = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    return {k: np.asarray(v, dtype=complex) for k, v in mats.items()}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--points", type=int, default=1_000_000)
    p.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests" / "data" / "radius_oracles.json"))
    args = p.parse_args()
    out = {"points": args.points, "cases": {}}
    for name, a in golden_matrices().items():
        res = oracle(a, args.points)
        out["cases"][name] = {"matrix": {"dim": a.shape[0], "re": a.real.ravel().tolist(), "im": a.imag.ravel().tolist()}, **res}
        print(f"{name:28s} grid={res['grid_max']:.15f} rayleigh={res['rayleigh_max']:.15f}")
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(json.dumps(out, indent=2) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()

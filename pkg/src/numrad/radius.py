"""Certified numerical radius v(a) = max_theta lambda_max(Re(e^{i theta} a)).

The support function g(theta) = lambda_max(Re(e^{i theta} a)) is 2*pi-periodic
and ||a||-Lipschitz.  The solver

1. samples g on a uniform grid (lower bound = best sample, Lipschitz upper
   bound = lower + ||a|| pi / N),
2. refines the best brackets with a vectorized golden-section search,
3. closes the gap with a level-set test: r is exceeded by g somewhere iff
   r is an eigenvalue of Re(e^{i theta} a) for some theta, i.e. iff the
   quadratic pencil z^2 a - 2 r z I + a* has an eigenvalue on the unit
   circle.  Crossing angles found this way bracket the region where g > r;
   their midpoints raise the lower bound, and when no midpoint exceeds r the
   value r is a certified upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    abs_square,
    adjoint,
    as_element,
    hermitian_eigh,
    hermitian_eigmax,
    hermitian_spectra,
    operator_norm,
    pencil_spectrum,
    spectral_radius,
)
from .report import BoundReport, PredicateReport

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
TWO_PI = 2.0 * math.pi
MIN_TOL = 1e-12
# candidate unimodular eigenvalues; generous on purpose, spurious ones only cost evaluations
UNIMODULAR_BAND = 1e-3
GOLDEN_XTOL = 1e-4


@dataclass(frozen=True, eq=False)
class RadiusEnclosure:
    lower: float
    upper: float
    argmax_theta: float
    witness: np.ndarray
    certified: bool = True
    evaluations: int = 0

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        """Convenience point estimate; inequality checks use lower/upper."""
        return 0.5 * (self.lower + self.upper)

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "theta": self.argmax_theta,
            "witness": {"re": self.witness.real.tolist(), "im": self.witness.imag.tolist()},
            "certified": self.certified,
        }


def default_grid_points(dim: int) -> int:
    return 512 if dim <= 16 else 2048


def rotated_part_max(a, theta: float) -> float:
    """lambda_max((e^{i theta} a + e^{-i theta} a*) / 2)."""
    a = np.asarray(a, dtype=np.complex128)
    rot = np.exp(1j * theta) * a
    lam, _ = hermitian_eigmax(0.5 * (rot + adjoint(rot)))
    return lam


def _rotated_stack(re, im, thetas):
    c = np.cos(thetas)[..., None, None]
    s = np.sin(thetas)[..., None, None]
    return c * re - s * im


def _support_values(re, im, thetas) -> np.ndarray:
    """g at paired (matrix, angle) entries: re/im have shape (k, n, n), thetas (k,)."""
    return hermitian_spectra(_rotated_stack(re, im, thetas), assume_hermitian=True)[:, -1]


def _golden_refine(re, im, lo, hi, xtol: float, max_iter: int = 60):
    """Vectorized golden-section maximization; bracket i lives on matrix re[i], im[i]."""
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f = _support_values(np.concatenate([re, re]), np.concatenate([im, im]), np.concatenate([x1, x2]))
    f1, f2 = f[: lo.size], f[lo.size :]
    best_x = np.where(f1 >= f2, x1, x2)
    best_f = np.maximum(f1, f2)
    evaluations = 2 * lo.size
    for _ in range(max_iter):
        if np.all(hi - lo <= xtol):
            break
        right = f2 > f1
        lo = np.where(right, x1, lo)
        hi = np.where(right, hi, x2)
        new_x = np.where(right, lo + GOLDEN * (hi - lo), hi - GOLDEN * (hi - lo))
        new_f = _support_values(re, im, new_x)
        evaluations += lo.size
        x1, f1, x2, f2 = (
            np.where(right, x2, new_x),
            np.where(right, f2, new_f),
            np.where(right, new_x, x1),
            np.where(right, new_f, f1),
        )
        improved = new_f > best_f
        best_x = np.where(improved, new_x, best_x)
        best_f = np.where(improved, new_f, best_f)
    return best_x, best_f, evaluations


def _crossing_angles(b: np.ndarray, level: float) -> np.ndarray:
    """Angles theta where `level` is an eigenvalue of Re(e^{i theta} b), with some spurious extras."""
    n = b.shape[0]
    pencil_a = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    pencil_b = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    eye = np.eye(n)
    pencil_a[:n, n:] = eye
    pencil_a[n:, :n] = -adjoint(b)
    pencil_a[n:, n:] = 2.0 * level * eye
    pencil_b[:n, :n] = eye
    pencil_b[n:, n:] = b
    z = pencil_spectrum(pencil_a, pencil_b)
    z = z[np.isfinite(z)]
    z = z[np.abs(np.abs(z) - 1.0) <= UNIMODULAR_BAND]
    return np.sort(np.mod(np.angle(z), TWO_PI))


def _probe_angles(angles: np.ndarray) -> np.ndarray:
    """Crossing angles plus the midpoints of consecutive ones (cyclically)."""
    if angles.size == 1:
        return np.array([angles[0], angles[0] + math.pi])
    nxt = np.roll(angles, -1)
    nxt[-1] += TWO_PI
    return np.concatenate([angles, 0.5 * (angles + nxt)])


def numerical_radius(
    a,
    tol: float = 1e-10,
    grid_points: int | None = None,
    max_iter: int = 40,
    golden_xtol: float = GOLDEN_XTOL,
) -> RadiusEnclosure:
    """Certified enclosure [lower, upper] of v(a), width <= tol * max(1, ||a||).

    If the gap cannot be closed within ``max_iter`` level-set rounds, the
    result carries ``certified=False`` and the rigorous Lipschitz upper bound.
    """
    return numerical_radii([a], tol, grid_points, max_iter, golden_xtol)[0]


def numerical_radii(
    mats,
    tol: float = 1e-10,
    grid_points: int | None = None,
    max_iter: int = 40,
    golden_xtol: float = GOLDEN_XTOL,
) -> list[RadiusEnclosure]:
    """``numerical_radius`` for many elements, vectorized over those of equal dim."""
    if not tol >= MIN_TOL:
        raise ValueError(f"tol must be >= {MIN_TOL}")
    mats = [as_element(m, dim_cap=None) for m in mats]
    out: list[RadiusEnclosure | None] = [None] * len(mats)
    by_dim: dict[int, list[int]] = {}
    for i, m in enumerate(mats):
        by_dim.setdefault(m.shape[0], []).append(i)
    for n, idx in by_dim.items():
        stack = np.stack([mats[i] for i in idx])
        for i, enc in zip(idx, _radii_same_dim(stack, tol, grid_points, max_iter, golden_xtol)):
            out[i] = enc
    return out


def _radii_same_dim(stack, tol, grid_points, max_iter, golden_xtol) -> list[RadiusEnclosure]:
    count, n, _ = stack.shape
    norms = np.sqrt(np.maximum(hermitian_spectra(abs_square(stack))[:, -1], 0.0))
    results: list[RadiusEnclosure | None] = [None] * count
    e1 = np.zeros(n, dtype=np.complex128)
    e1[0] = 1.0
    live = np.flatnonzero(norms > 0.0)
    for i in np.flatnonzero(norms == 0.0):
        results[i] = RadiusEnclosure(0.0, 0.0, 0.0, e1.copy(), True, 0)
    if live.size == 0:
        return results

    # homogeneity: work with ||b|| = 1, so g is 1-Lipschitz
    norm = norms[live]
    b = stack[live] / norm[:, None, None]
    m = live.size
    re = 0.5 * (b + adjoint(b))
    im = (b - adjoint(b)) / 2j
    tol_n = tol * np.maximum(1.0, norm) / norm

    n_grid = grid_points or default_grid_points(n)
    n_grid += n_grid % 2
    half = n_grid // 2
    th = TWO_PI * np.arange(half) / n_grid
    # g(theta + pi) = -lambda_min(H(theta)): one solve gives two grid points
    w = hermitian_spectra(_rotated_stack(re[:, None], im[:, None], th[None, :]), assume_hermitian=True)
    thetas = np.concatenate([th, th + math.pi])
    values = np.concatenate([w[..., -1], -w[..., 0]], axis=1)
    evaluations = np.full(m, n_grid)
    k = np.argmax(values, axis=1)
    lower = values[np.arange(m), k]
    best_theta = thetas[k]
    step = TWO_PI / n_grid
    upper = lower + math.pi / n_grid

    # golden-section on up to three best local maxima that could still hold the max
    is_peak = (values >= np.roll(values, 1, axis=1)) & (values >= np.roll(values, -1, axis=1))
    is_peak &= values + step >= lower[:, None]
    score = np.where(is_peak, values, -np.inf)
    top = np.argsort(-score, axis=1)[:, :3]
    owner = np.repeat(np.arange(m), top.shape[1])
    top = top.ravel()
    keep = np.isfinite(score[owner, top])
    owner, top = owner[keep], top[keep]
    if owner.size:
        bx, bf, ev = _golden_refine(re[owner], im[owner], thetas[top] - step, thetas[top] + step, golden_xtol)
        np.add.at(evaluations, owner, ev // max(owner.size, 1))
        for o, x, f in zip(owner, bx, bf):
            if f > lower[o]:
                lower[o], best_theta[o] = f, x

    certified = upper - lower <= tol_n
    for _ in range(max_iter):
        active = np.flatnonzero(~certified)
        if active.size == 0:
            break
        levels = lower + 0.5 * tol_n
        probe_owner, probe_theta = [], []
        for i in active:
            angles = _crossing_angles(b[i], levels[i])
            if angles.size == 0:
                upper[i], certified[i] = levels[i], True
                continue
            probes = _probe_angles(angles)
            probe_owner.append(np.full(probes.size, i))
            probe_theta.append(probes)
        if not probe_owner:
            break
        po = np.concatenate(probe_owner)
        pt = np.concatenate(probe_theta)
        pv = _support_values(re[po], im[po], pt)
        np.add.at(evaluations, po, 1)
        best_v = np.full(m, -np.inf)
        np.maximum.at(best_v, po, pv)
        for i in np.unique(po):
            if best_v[i] >= levels[i]:
                j = np.flatnonzero((po == i) & (pv == best_v[i]))[0]
                lower[i], best_theta[i] = pv[j], pt[j]
            else:
                # no midpoint rises above the level: the level bounds g everywhere
                upper[i], certified[i] = levels[i], True

    witness_h = _rotated_stack(re, im, best_theta)
    _, vecs = hermitian_eigh(witness_h)
    witness = vecs[:, :, -1]
    attained = np.abs(np.einsum("ki,kij,kj->k", np.conj(witness), b, witness))
    lower = np.maximum(lower, attained)
    upper = np.maximum(np.minimum(upper, 1.0), lower)
    certified &= upper - lower <= tol_n
    for j, i in enumerate(live):
        results[i] = RadiusEnclosure(
            lower=float(lower[j] * norm[j]),
            upper=float(upper[j] * norm[j]),
            argmax_theta=float(np.mod(best_theta[j], TWO_PI)),
            witness=witness[j],
            certified=bool(certified[j]),
            evaluations=int(evaluations[j]),
        )
    return results


def check_norm_sandwich(
    a, tol: float = 1e-11, rel_slack: float = 1e-9, enclosure: RadiusEnclosure | None = None
) -> BoundReport:
    """||a||/2 <= v(a) <= ||a||, reported with both margins.

    ``margin`` is the worse of the two; violations are recorded, never raised.
    """
    a = as_element(a, dim_cap=None)
    enc = enclosure or numerical_radius(a, tol=tol)
    norm = operator_norm(a)
    lower_margin = enc.lower - 0.5 * norm
    upper_margin = norm - enc.upper
    worst = min(lower_margin, upper_margin)
    return BoundReport(
        bound_id="sandwich",
        power=1,
        lhs=norm - worst,
        rhs=norm,
        params={"slack": rel_slack * norm},
        components={
            "v_lower": enc.lower,
            "v_upper": enc.upper,
            "norm": norm,
            "lower_margin": lower_margin,
            "upper_margin": upper_margin,
            "ratio": enc.midpoint / norm if norm else 1.0,
            "certified": enc.certified,
        },
    )


def sandwich_holds(report: BoundReport) -> bool:
    slack = report.params["slack"]
    return report.components["lower_margin"] >= -slack and report.components["upper_margin"] >= -slack


def spectral_corollary_probe(
    a, enclosure: RadiusEnclosure | None = None, norm_tol: float = 1e-10, rtol: float = 1e-6
) -> PredicateReport:
    """If v(a) = ||a|| then v(a) = r(a)."""
    a = as_element(a, dim_cap=None)
    norm = operator_norm(a)
    enc = enclosure or numerical_radius(a, tol=1e-11)
    rho = spectral_radius(a)
    applicable = enc.lower >= norm * (1.0 - norm_tol)
    gap = max(abs(enc.lower - rho), abs(enc.upper - rho))
    holds = (not applicable) or gap <= rtol * norm
    return PredicateReport(
        name="spectral_corollary",
        applicable=applicable,
        holds=holds,
        ratio=rho / enc.upper if enc.upper > 0 else 1.0,
        margin=rtol * norm - gap if applicable else math.inf,
        details={"v_lower": enc.lower, "v_upper": enc.upper, "spectral_radius": rho, "norm": norm},
    )

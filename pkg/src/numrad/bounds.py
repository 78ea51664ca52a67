"""Upper bounds for v(a) built from norms of powers and radii of related elements.

Every bound returns a :class:`BoundReport` whose ``lhs`` is ``v(a)^p`` taken
from the *upper* end of the enclosure and whose ``rhs`` uses enclosure uppers
for any radius it contains, so a reported violation can never be an artefact
of solver error.  The shared quantities of one element live in an
:class:`ElementProfile`, which caches them and lets a caller batch all
radius solves of many elements into a single vectorized call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .algebra import abs_square, adjoint, as_element, operator_norm
from .buzano import MeanFunction, alpha_weight
from .errors import XiOutOfDomain, ZeroParameter
from .radius import RadiusEnclosure, numerical_radii
from .report import BoundReport, PredicateReport
from .states import State, positive_value, state_apply

POWER_CAP = 8
DEFAULT_TOL = 1e-11
DOMINANCE_SLACK = 1e-9
PROBE_NORM_TOL = 1e-10
PROBE_RTOL = 1e-6

# radius keys: positive ints are powers a^k; the two strings are the mixed cubes
STAR_LEFT = "a*a^2"
STAR_RIGHT = "a^2a*"


@dataclass(eq=False)
class ElementProfile:
    """Norm and radius data of one element, computed lazily and cached."""

    a: np.ndarray
    tol: float = DEFAULT_TOL
    grid_points: int | None = None
    _powers: dict = field(default_factory=dict, repr=False)
    _norms: dict = field(default_factory=dict, repr=False)
    _radii: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.a = as_element(self.a, dim_cap=None)
        self._powers[1] = self.a

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    @property
    def norm(self) -> float:
        return self.power_norm(1)

    def power(self, k: int) -> np.ndarray:
        if k not in self._powers:
            half = self.power(k // 2)
            p = half @ half
            self._powers[k] = p @ self.a if k % 2 else p
        return self._powers[k]

    def power_norm(self, k: int) -> float:
        if k not in self._norms:
            self._norms[k] = operator_norm(self.power(k))
        return self._norms[k]

    def _positive_norm(self, key: str, exponent: int) -> float:
        if key not in self._norms:
            left = abs_square(adjoint(self.a))  # |a*|^2 = a a*
            right = abs_square(self.a)  # |a|^2 = a* a
            if exponent == 4:
                left, right = left @ left, right @ right
            self._norms[key] = operator_norm(left + right)
        return self._norms[key]

    @property
    def sum_abs2_norm(self) -> float:
        """|| |a*|^2 + |a|^2 ||."""
        return self._positive_norm("s2", 2)

    @property
    def sum_abs4_norm(self) -> float:
        """|| |a*|^4 + |a|^4 ||."""
        return self._positive_norm("s4", 4)

    def operand(self, key) -> np.ndarray:
        if key == STAR_LEFT:
            return adjoint(self.a) @ self.power(2)
        if key == STAR_RIGHT:
            return self.power(2) @ adjoint(self.a)
        if isinstance(key, (int, np.integer)) and key >= 1:
            return self.power(int(key))
        raise KeyError(f"unknown radius key {key!r}")

    def radius(self, key=1) -> RadiusEnclosure:
        if key not in self._radii:
            prefetch_radii([self], [key])
        return self._radii[key]

    def v_upper(self, key=1) -> float:
        return self.radius(key).upper


def prefetch_radii(profiles: Sequence[ElementProfile], keys: Iterable) -> None:
    """Solve every missing (profile, key) radius in one batched call per tolerance."""
    keys = list(keys)
    groups: dict[tuple, list[tuple[ElementProfile, object]]] = {}
    for prof in profiles:
        for key in keys:
            if key not in prof._radii:
                groups.setdefault((prof.tol, prof.grid_points), []).append((prof, key))
    for (tol, grid), todo in groups.items():
        encs = numerical_radii([p.operand(k) for p, k in todo], tol=tol, grid_points=grid)
        for (p, k), enc in zip(todo, encs):
            p._radii[k] = enc


def as_profile(a, tol: float = DEFAULT_TOL) -> ElementProfile:
    return a if isinstance(a, ElementProfile) else ElementProfile(a, tol=tol)


def radius_keys(max_power: int = 6) -> list:
    return list(range(1, max_power + 1)) + [STAR_LEFT, STAR_RIGHT]


def _check_nonzero(**params):
    for name, value in params.items():
        if value == 0:
            raise ZeroParameter(f"{name} must be nonzero")


def _report(bound_id, power, prof, terms: dict, params=None, extra=None) -> BoundReport:
    lhs = prof.v_upper(1) ** power
    rhs = math.fsum(terms.values())
    components = {"terms": dict(terms), "v_upper": prof.v_upper(1), "norm": prof.norm}
    components.update(extra or {})
    return BoundReport(bound_id, power, lhs, rhs, dict(params or {}), components)


# --- power-sum family ---------------------------------------------------------


def power_sum_bound(a, n: int, cap: int = POWER_CAP) -> BoundReport:
    """v^n(a) <= sum_{i<n} ||a^i|| ||a||^{n-i} / 2^i + v(a^n) / 2^{n-1}."""
    if not 2 <= n <= cap:
        raise ValueError(f"n must lie in [2, {cap}], got {n}")
    prof = as_profile(a)
    norm = prof.norm
    terms = {f"i={i}": prof.power_norm(i) * norm ** (n - i) / 2.0**i for i in range(1, n)}
    terms["radius"] = prof.v_upper(n) / 2.0 ** (n - 1)
    return _report("thm34", n, prof, terms, {"n": n}, {"direction": "lhs and v(a^n) from enclosure uppers"})


def geometric_norm_bound(a, n: int, cap: int = POWER_CAP) -> BoundReport:
    """v^n(a) <= sum_{i<n} 2^{n-i-1} ||a||^{n-i} ||a^i|| / (2^{n-1} - 1); no radius on the right."""
    if not 2 <= n <= cap:
        raise ValueError(f"n must lie in [2, {cap}], got {n}")
    prof = as_profile(a)
    norm = prof.norm
    scale = 2.0 ** (n - 1) - 1.0
    terms = {f"i={i}": 2.0 ** (n - i - 1) * norm ** (n - i) * prof.power_norm(i) / scale for i in range(1, n)}
    return _report("chain", n, prof, terms, {"n": n})


# --- cubic family -------------------------------------------------------------


def _cubic_terms(prof: ElementProfile, alpha, beta) -> dict:
    ab = abs(alpha * beta)
    return {
        "sum_abs2": alpha_weight(alpha) / (2.0 * abs(alpha)) * prof.sum_abs2_norm * prof.norm,
        "square": alpha_weight(beta) / ab * prof.power_norm(2) * prof.norm,
        "cube_radius": prof.v_upper(3) / ab,
    }


def cubic_bound(a, alpha: complex = 2.0, beta: complex = 2.0) -> BoundReport:
    """v^3(a) <= w(alpha)/(2|alpha|) S ||a|| + w(beta)/|alpha beta| ||a^2|| ||a|| + v(a^3)/|alpha beta|,

    with w(t) = max{1, |t - 1|} and S = || |a*|^2 + |a|^2 ||.
    """
    _check_nonzero(alpha=alpha, beta=beta)
    prof = as_profile(a)
    return _report("thm31", 3, prof, _cubic_terms(prof, alpha, beta), {"alpha": alpha, "beta": beta})


def cubic_presets(a) -> list[BoundReport]:
    """The four parameter-free cubic bounds: (2, 2), both -> inf, (2, -> inf), and the averaged form."""
    prof = as_profile(a)
    s, sq, norm = prof.sum_abs2_norm, prof.power_norm(2), prof.norm
    c311 = _cubic_terms(prof, 2.0, 2.0)
    return [
        _report("c311", 3, prof, c311, {"alpha": 2.0, "beta": 2.0}),
        _report("c313", 3, prof, {"sum_abs2": 0.5 * s * norm}, {"alpha": "inf", "beta": "inf"}),
        _report("c314", 3, prof, {"sum_abs2": 0.25 * s * norm, "square": 0.5 * sq * norm}, {"alpha": 2.0, "beta": "inf"}),
        _report("c312", 3, prof, {"sum_abs2": s * norm / 3.0, "square": sq * norm / 3.0}),
    ]


def cubic_min_bound(a, alpha: complex = 2.0) -> BoundReport:
    """v^3(a) <= (w(alpha) ||a||^3 + min{v(a* a^2), v(a^2 a*)}) / |alpha|."""
    _check_nonzero(alpha=alpha)
    prof = as_profile(a)
    left, right = prof.v_upper(STAR_LEFT), prof.v_upper(STAR_RIGHT)
    terms = {
        "norm_cube": alpha_weight(alpha) * prof.norm**3 / abs(alpha),
        "mixed_radius": min(left, right) / abs(alpha),
    }
    extra = {"v_a*a^2": left, "v_a^2a*": right, "argmin": STAR_LEFT if left <= right else STAR_RIGHT}
    return _report("thm32", 3, prof, terms, {"alpha": alpha}, extra)


def cubic_equality_probe(a, norm_tol: float = PROBE_NORM_TOL, rtol: float = PROBE_RTOL) -> PredicateReport:
    """When v(a) = ||a||, both v(a* a^2) and v(a^2 a*) must equal ||a||^3."""
    prof = as_profile(a)
    norm = prof.norm
    applicable = norm > 0 and prof.radius(1).lower >= norm * (1.0 - norm_tol)
    details = {"norm": norm, "v_lower": prof.radius(1).lower}
    gaps = []
    if applicable:
        target = norm**3
        for key in (STAR_LEFT, STAR_RIGHT):
            enc = prof.radius(key)
            gaps.append(max(abs(enc.lower - target), abs(enc.upper - target)))
            details[f"v_{key}"] = enc.upper
    worst = max(gaps, default=0.0)
    return PredicateReport(
        name="thm32_equality",
        applicable=applicable,
        holds=(not applicable) or worst <= rtol * norm**3,
        ratio=worst / norm**3 if applicable else 0.0,
        margin=rtol * norm**3 - worst if applicable else math.inf,
        details=details,
    )


# --- sextic family ------------------------------------------------------------


def sextic_bound(
    a,
    f1: MeanFunction | None = None,
    xi1: float = 0.0,
    f2: MeanFunction | None = None,
    xi2: float = 0.0,
    alpha: complex = 2.0,
    beta: complex = 2.0,
    gamma: complex = 2.0,
) -> BoundReport:
    """Six-term bound on v^6(a) parametrized by two mean functions and three nonzero scalars."""
    _check_nonzero(alpha=alpha, beta=beta, gamma=gamma)
    f1 = f1 or MeanFunction.identity()
    f2 = f2 or MeanFunction.identity()
    for f, xi in ((f1, xi1), (f2, xi2)):
        if not f.admits(xi):
            raise XiOutOfDomain(f"xi = {xi} needs xi and 1 - xi in {f.domain}")
    prof = as_profile(a)
    norm, sq = prof.norm, prof.power_norm(2)
    s2, s4, v3 = prof.sum_abs2_norm, prof.sum_abs4_norm, prof.v_upper(3)
    wa, wb, wg = alpha_weight(alpha), alpha_weight(beta), alpha_weight(gamma)
    a2, ab2, g = abs(alpha) ** 2, abs(alpha * beta) ** 2, abs(gamma)
    f1c, f2c = f1(1.0 - xi1), f2(1.0 - xi2)
    lead = f1(xi1) + 2.0 * wa
    terms = {
        "sum_abs4": wa * wa / (2.0 * a2) * s4 * norm**2,
        "square_sq": f1c * wb * wb / ab2 * sq**2 * norm**2,
        "cube_radius_sq": f1c * f2c / ab2 * v3**2,
        "square_cube": f1c * (f2(xi2) + 2.0 * wb) / ab2 * sq * norm * v3,
        "sum_abs2_square": lead * wg / (2.0 * a2 * g) * s2 * sq * norm**2,
        "sum_abs2_cube": lead / (2.0 * a2 * g) * s2 * norm * v3,
    }
    params = {
        "f1": f1.family, "xi1": xi1, "f2": f2.family, "xi2": xi2,
        "alpha": alpha, "beta": beta, "gamma": gamma,
    }  # fmt: skip
    return _report("thm33", 6, prof, terms, params)


def sextic_preset(a) -> BoundReport:
    """Parameter-free sextic bound (all scalars 2, identity mean functions at 0)."""
    prof = as_profile(a)
    norm, sq = prof.norm, prof.power_norm(2)
    s2, s4, v3 = prof.sum_abs2_norm, prof.sum_abs4_norm, prof.v_upper(3)
    terms = {
        "sum_abs4": s4 * norm**2 / 8.0,
        "square_sq": sq**2 * norm**2 / 16.0,
        "cube_radius_sq": v3**2 / 16.0,
        "square_cube": sq * norm * v3 / 8.0,
        "sum_abs2_square": s2 * sq * norm**2 / 8.0,
        "sum_abs2_cube": s2 * norm * v3 / 8.0,
    }
    return _report("thm33_preset", 6, prof, terms)


# --- properties ---------------------------------------------------------------


def dominance_check(report: BoundReport, a, slack: float = DOMINANCE_SLACK) -> PredicateReport:
    """rhs <= ||a||^p (1 + slack): the bound never loses to the trivial one."""
    prof = as_profile(a)
    trivial = prof.norm**report.power
    return PredicateReport(
        name=f"dominance[{report.bound_id}]",
        applicable=True,
        holds=report.rhs <= trivial * (1.0 + slack),
        ratio=report.rhs / trivial if trivial > 0 else 0.0,
        margin=trivial * (1.0 + slack) - report.rhs,
        details={"rhs": report.rhs, "trivial": trivial, "power": report.power},
    )


def power_inequality(a, k: int, rel_slack: float = 1e-8) -> BoundReport:
    """v(a^k) <= v(a)^k; lhs from the enclosure lower of v(a^k), rhs from the upper of v(a)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    prof = as_profile(a)
    lhs = prof.radius(k).lower
    rhs = prof.v_upper(1) ** k
    return BoundReport(
        "power",
        k,
        lhs,
        rhs,
        {"k": k, "slack": rel_slack * max(1.0, prof.norm**k)},
        {"v_ak_lower": lhs, "v_upper": prof.v_upper(1)},
    )


def power_sum_state_sides(phi: State, a, n: int) -> tuple[float, float]:
    """State-level form of the power-sum bound, checked for one state:

    |phi(a)|^n <= sum_{i<n} 2^{-i} sqrt(phi(|a^i|^2)) phi(|a*|^2)^{(n-i)/2} + 2^{1-n} |phi(a^n)|.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    a = as_element(a, dim_cap=None)
    co = positive_value(phi, abs_square(adjoint(a)))
    lhs = abs(state_apply(phi, a)) ** n
    terms = []
    p = a
    for i in range(1, n):
        terms.append(math.sqrt(positive_value(phi, abs_square(p))) * co ** ((n - i) / 2.0) / 2.0**i)
        p = p @ a
    terms.append(abs(state_apply(phi, p)) / 2.0 ** (n - 1))
    return lhs, math.fsum(terms)


def trivial_bound(a, power: int) -> BoundReport:
    """v^p(a) <= ||a||^p, the baseline every bound is compared against."""
    prof = as_profile(a)
    return _report("trivial", power, prof, {"norm_power": prof.norm**power}, {"p": power})


# identifiers accepted by `evaluate_bound` and the CLI
BOUND_FAMILIES = ("thm34", "chain", "thm31", "thm32", "thm33")


def evaluate_bound(a, bound: str, n: int = 2, alpha: complex = 2.0, beta: complex = 2.0, gamma: complex = 2.0,
                   f1: MeanFunction | None = None, xi1: float = 0.0,
                   f2: MeanFunction | None = None, xi2: float = 0.0) -> list[BoundReport]:  # fmt: skip
    """Dispatch by family name; ``all`` evaluates every family plus the presets."""
    prof = as_profile(a)
    if bound == "all":
        prefetch_radii([prof], radius_keys(max(n, 3)))
        out = []
        for b in BOUND_FAMILIES:
            out.extend(evaluate_bound(prof, b, n, alpha, beta, gamma, f1, xi1, f2, xi2))
        out.extend(cubic_presets(prof))
        out.append(sextic_preset(prof))
        return out
    if bound == "thm34":
        return [power_sum_bound(prof, n)]
    if bound == "chain":
        return [geometric_norm_bound(prof, n)]
    if bound == "thm31":
        return [cubic_bound(prof, alpha, beta)]
    if bound == "thm32":
        return [cubic_min_bound(prof, alpha)]
    if bound == "thm33":
        return [sextic_bound(prof, f1, xi1, f2, xi2, alpha, beta, gamma)]
    raise ValueError(f"unknown bound {bound!r}")

"""Buzano-type inequalities for a state and elements of a C*-module.

Every evaluator returns ``(lhs, rhs)`` (plus a term breakdown for the squared
product form) so callers can compute margins and tightness themselves.
Moduli of long products are accumulated in log space so that many small
factors underflow gracefully instead of flushing to zero early.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import EtaOutOfRange, NegativeZeta, UnnormalizedZ, XiOutOfDomain, ZeroParameter
from .states import State, abs_square_module, inner_product, positive_value, state_apply

Z_NORM_TOL = 1e-10
INVOLUTION_TOL = 1e-12


# --- mean functions -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MeanFunction:
    """A map f: D -> [0, inf) with f(t) + f(1 - t) = 1 whenever t, 1 - t lie in D."""

    family: str
    domain: tuple[float, float]
    evaluator: Callable[[float], float]

    def __post_init__(self):
        lo, hi = map(float, self.domain)
        if not lo <= hi:
            raise ValueError(f"empty domain {self.domain}")
        object.__setattr__(self, "domain", (lo, hi))
        for t in np.linspace(lo, hi, 101):
            ft = float(self.evaluator(t))
            if ft < 0:
                raise ValueError(f"{self.family}: f({t}) = {ft} < 0")
            if self.contains(1.0 - t):
                gap = abs(ft + float(self.evaluator(1.0 - t)) - 1.0)
                if gap > INVOLUTION_TOL:
                    raise ValueError(f"{self.family}: f(t) + f(1-t) - 1 = {gap:.2e} at t = {t}")

    def contains(self, t: float) -> bool:
        return self.domain[0] <= t <= self.domain[1]

    def admits(self, xi: float) -> bool:
        """Both xi and 1 - xi lie in the domain."""
        return self.contains(xi) and self.contains(1.0 - xi)

    def __call__(self, t: float) -> float:
        if not self.contains(t):
            raise XiOutOfDomain(f"{t} outside domain {self.domain} of {self.family}")
        return float(self.evaluator(t))

    @classmethod
    def identity(cls) -> MeanFunction:
        """f(t) = t on [0, 1]."""
        return cls("identity_on_unit_interval", (0.0, 1.0), lambda t: t)

    @classmethod
    def affine_quarter(cls) -> MeanFunction:
        """f(t) = (1 + 2t) / 4 on [-1/2, 3/2]."""
        return cls("affine_quarter", (-0.5, 1.5), lambda t: (1.0 + 2.0 * t) / 4.0)

    @classmethod
    def tabulated(cls, ts: Sequence[float], values: Sequence[float]) -> MeanFunction:
        """Piecewise-linear interpolation of user samples; validated on construction."""
        ts = np.asarray(ts, dtype=float)
        values = np.asarray(values, dtype=float)
        order = np.argsort(ts)
        ts, values = ts[order], values[order]
        return cls("custom_tabulated", (ts[0], ts[-1]), lambda t: float(np.interp(t, ts, values)))

    @classmethod
    def by_name(cls, name: str) -> MeanFunction:
        """Built-in families by name; instances are immutable, so they are shared."""
        return _named_mean_function(name)


@lru_cache(maxsize=None)
def _named_mean_function(name: str) -> MeanFunction:
    try:
        return {
            "identity": MeanFunction.identity,
            "identity_on_unit_interval": MeanFunction.identity,
            "affine_quarter": MeanFunction.affine_quarter,
        }[name]()
    except KeyError:
        raise ValueError(f"unknown mean function {name!r}") from None


# --- helpers ------------------------------------------------------------------


def modulus_product(values) -> float:
    """prod |v|, in log space once there are more than four factors."""
    mods = [abs(v) for v in values]
    if len(mods) <= 4:
        return math.prod(mods)
    if any(m == 0.0 for m in mods):
        return 0.0
    return math.exp(math.fsum(math.log(m) for m in mods))


def alpha_weight(alpha: complex) -> float:
    """max{1, |alpha - 1|}."""
    return max(1.0, abs(alpha - 1.0))


def _check_alpha(alpha: complex):
    if alpha == 0:
        raise ZeroParameter("alpha must be nonzero")


def _check_z(phi: State, z) -> None:
    mass = state_apply(phi, abs_square_module(z)).real
    if abs(mass - 1.0) > Z_NORM_TOL:
        raise UnnormalizedZ(f"phi(|z|^2) = {mass!r}, expected 1")


@dataclass(frozen=True)
class _ProductData:
    """Moduli shared by all product-form inequalities."""

    lhs_modulus: float  # |prod phi(<x_i, z>)|
    root_mass: float  # prod sqrt(phi(|x_i|^2))
    mixed: float  # |phi(<x_1, x_2>) prod_{i>=3} phi(<x_i, z>)|


def _product_data(phi: State, xs, z) -> _ProductData:
    if len(xs) < 2:
        raise ValueError("need at least two module elements")
    _check_z(phi, z)
    coupling = [state_apply(phi, inner_product(x, z)) for x in xs]
    masses = [positive_value(phi, abs_square_module(x)) for x in xs]
    pair = state_apply(phi, inner_product(xs[0], xs[1]))
    return _ProductData(
        lhs_modulus=modulus_product(coupling),
        root_mass=modulus_product(np.sqrt(masses)),
        mixed=modulus_product([pair, *coupling[2:]]),
    )


# --- evaluators ---------------------------------------------------------------


def product_buzano_alpha_sides(phi: State, xs, z, alpha: complex) -> tuple[float, float]:
    """|prod phi(<x_i,z>)| <= (max{1,|a-1|} prod sqrt(phi(|x_i|^2)) + |phi(<x1,x2>) prod_{i>=3} phi(<x_i,z>)|) / |a|."""
    _check_alpha(alpha)
    d = _product_data(phi, xs, z)
    return d.lhs_modulus, (alpha_weight(alpha) * d.root_mass + d.mixed) / abs(alpha)


def buzano_alpha_sides(phi: State, x, y, z, alpha: complex) -> tuple[float, float]:
    """|phi(<x,z>) phi(<y,z>)| <= (max{1,|a-1|} sqrt(phi(|x|^2) phi(|y|^2)) + |phi(<x,y>)|) / |a|."""
    return product_buzano_alpha_sides(phi, (x, y), z, alpha)


def buzano_sides(phi: State, x, y, z) -> tuple[float, float]:
    """The alpha = 2 case: the module form of the classical Buzano inequality."""
    return buzano_alpha_sides(phi, x, y, z, 2.0)


@dataclass(frozen=True, eq=False)
class BuzanoInstance:
    phi: State
    xs: tuple
    z: np.ndarray
    alpha: complex
    xi: float
    f: MeanFunction

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(np.asarray(x, dtype=np.complex128) for x in self.xs))
        object.__setattr__(self, "z", np.asarray(self.z, dtype=np.complex128))
        if len(self.xs) < 2:
            raise ValueError("need at least two module elements")
        _check_alpha(self.alpha)
        _check_z(self.phi, self.z)
        if not self.f.admits(self.xi):
            raise XiOutOfDomain(f"xi = {self.xi} needs xi and 1 - xi in {self.f.domain}")


def product_buzano_squared_sides(inst: BuzanoInstance) -> tuple[float, float, tuple[float, float, float]]:
    """Squared product inequality with a mean function, returning (lhs, rhs, three rhs terms)."""
    d = _product_data(inst.phi, inst.xs, inst.z)
    a2 = abs(inst.alpha) ** 2
    w = alpha_weight(inst.alpha)
    terms = (
        w * w / a2 * d.root_mass**2,
        inst.f(1.0 - inst.xi) / a2 * d.mixed**2,
        (inst.f(inst.xi) + 2.0 * w) / a2 * d.root_mass * d.mixed,
    )
    return d.lhs_modulus**2, math.fsum(terms), terms


def _squared_closed_form(phi, xs, z, alpha, mid_coef, cross_coef):
    _check_alpha(alpha)
    d = _product_data(phi, xs, z)
    a2 = abs(alpha) ** 2
    w = alpha_weight(alpha)
    terms = (
        w * w / a2 * d.root_mass**2,
        mid_coef / a2 * d.mixed**2,
        cross_coef / a2 * d.root_mass * d.mixed,
    )
    return d.lhs_modulus**2, math.fsum(terms), terms


def zeta_family_sides(phi: State, xs, z, zeta: float, alpha: complex) -> tuple[float, float]:
    """Closed form of the squared inequality with f(t) = t and xi = zeta / (1 + zeta)."""
    if zeta < 0:
        raise NegativeZeta(f"zeta = {zeta} < 0")
    w = alpha_weight(alpha)
    lhs, rhs, _ = _squared_closed_form(
        phi, xs, z, alpha, 1.0 / (1.0 + zeta), (zeta + 2.0 * (1.0 + zeta) * w) / (1.0 + zeta)
    )
    return lhs, rhs


def zeta_family_instance(phi: State, xs, z, zeta: float, alpha: complex) -> BuzanoInstance:
    if zeta < 0:
        raise NegativeZeta(f"zeta = {zeta} < 0")
    return BuzanoInstance(phi, tuple(xs), z, alpha, zeta / (1.0 + zeta), MeanFunction.identity())


def eta_family_sides(phi: State, xs, z, eta: float, alpha: complex) -> tuple[float, float]:
    """Closed form of the squared inequality with f(t) = (1 + 2t)/4 and xi = eta."""
    if not -0.5 <= eta <= 1.5:
        raise EtaOutOfRange(f"eta = {eta} outside [-1/2, 3/2]")
    w = alpha_weight(alpha)
    lhs, rhs, _ = _squared_closed_form(phi, xs, z, alpha, (3.0 - 2.0 * eta) / 4.0, (1.0 + 2.0 * eta + 8.0 * w) / 4.0)
    return lhs, rhs


def eta_family_instance(phi: State, xs, z, eta: float, alpha: complex) -> BuzanoInstance:
    if not -0.5 <= eta <= 1.5:
        raise EtaOutOfRange(f"eta = {eta} outside [-1/2, 3/2]")
    return BuzanoInstance(phi, tuple(xs), z, alpha, eta, MeanFunction.affine_quarter())

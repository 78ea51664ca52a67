"""States on M_n as density matrices and the rectangular-matrix C*-module.

A module element is an m x n complex array ``x``; the algebra-valued inner
product is ``<x, y> = y* x`` so that, in the module X = A, ``<a, e> = a`` and
``<a, a*> = a^2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import adjoint, hermitian_eigmin, hermitian_part
from .errors import DegenerateZ, DimensionMismatch

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
DEGENERATE_Z_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class State:
    """A normalized state phi(a) = trace(rho a)."""

    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=np.complex128)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError(f"density matrix must be square, got {rho.shape}")
        if not np.all(np.isfinite(rho)):
            raise ValueError("density matrix has non-finite entries")
        scale = max(1.0, float(np.max(np.abs(rho))))
        if np.max(np.abs(rho - adjoint(rho))) > HERMITIAN_TOL * scale:
            raise ValueError("density matrix is not Hermitian")
        rho = hermitian_part(rho)
        if abs(np.trace(rho) - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {np.trace(rho).real!r} != 1")
        if hermitian_eigmin(rho) < -PSD_TOL:
            raise ValueError("density matrix is not positive semidefinite")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def __call__(self, a) -> complex:
        return state_apply(self, a)

    @classmethod
    def maximally_mixed(cls, n: int) -> State:
        return cls(np.eye(n, dtype=np.complex128) / n)

    @classmethod
    def vector(cls, x) -> State:
        """Vector state rho = x x* / ||x||^2."""
        x = np.asarray(x, dtype=np.complex128).ravel()
        x = x / np.linalg.norm(x)
        return cls(np.outer(x, np.conj(x)))


def state_apply(phi: State, a) -> complex:
    a = np.asarray(a, dtype=np.complex128)
    if a.shape != phi.rho.shape:
        raise DimensionMismatch(f"state dim {phi.dim} vs element shape {a.shape}")
    # trace(rho a) without forming the product
    return complex(np.einsum("ij,ji->", phi.rho, a))


def inner_product(x, y) -> np.ndarray:
    """<x, y> = y* x."""
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    if x.shape != y.shape:
        raise DimensionMismatch(f"module shapes differ: {x.shape} vs {y.shape}")
    return adjoint(y) @ x


def abs_square_module(x) -> np.ndarray:
    """|x|^2 = <x, x>."""
    return inner_product(x, x)


def positive_value(phi: State, p) -> float:
    """phi(p) for a positive p, as a real number clipped at zero."""
    return max(state_apply(phi, p).real, 0.0)


def normalize_against_state(z, phi: State) -> np.ndarray:
    z = np.asarray(z, dtype=np.complex128)
    mass = positive_value(phi, abs_square_module(z))
    if mass <= DEGENERATE_Z_TOL:
        raise DegenerateZ(f"phi(|z|^2) = {mass:.3e} is too small to normalize")
    return z / np.sqrt(mass)


def cauchy_schwarz_gap(phi: State, x, y) -> float:
    """sqrt(phi(|x|^2)) sqrt(phi(|y|^2)) - |phi(<x, y>)|, nonnegative up to round-off."""
    sx = positive_value(phi, abs_square_module(x))
    sy = positive_value(phi, abs_square_module(y))
    return float(np.sqrt(sx) * np.sqrt(sy) - abs(state_apply(phi, inner_product(x, y))))

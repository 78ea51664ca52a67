"""Random elements, states and module tuples with reproducible per-trial streams.

Each trial draws from its own Philox generator keyed by ``(seed, stream,
trial)``, so a result never depends on how trials are split across workers
and any single trial can be regenerated in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import adjoint, operator_norm, qr_decompose
from .errors import DegenerateZ, ResampleBudgetExhausted
from .states import State, normalize_against_state

KINDS = (
    "ginibre",
    "gue_hermitian",
    "haar_unitary",
    "normal_random",
    "jordan_nilpotent",
    "two_nilpotent",
    "shifted_scaled",
)
STRUCTURE_TOL = 1e-12


def trial_rng(seed: int, stream: int, trial: int) -> np.random.Generator:
    """Independent generator for one trial; counter-based, so order-free."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream), int(trial)])))


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    dim: int
    count: int = 1
    normalize: bool = True
    # only for kind == "shifted_scaled": a = scale * base + shift * I
    base: str | None = None
    scale: complex = 1.0
    shift: complex = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if self.dim < 1 or self.count < 1:
            raise ValueError("dim and count must be >= 1")
        if self.kind == "two_nilpotent" and self.dim < 2:
            raise ValueError("two_nilpotent needs dim >= 2")
        if self.kind == "shifted_scaled":
            if self.base is None or self.base == "shifted_scaled":
                raise ValueError("shifted_scaled needs a base kind other than itself")
            EnsembleSpec(self.base, self.dim)

    @property
    def label(self) -> str:
        if self.kind == "shifted_scaled":
            return f"shifted_scaled[{self.base},{self.scale},{self.shift}]/n={self.dim}"
        return f"{self.kind}/n={self.dim}"


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """iid standard complex Gaussian entries (E|z|^2 = 1)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = qr_decompose(complex_gaussian(rng, (n, n)))
    d = np.diagonal(r)
    # fix the phase ambiguity of QR so the law is Haar
    return q * (d / np.abs(d))


def _raw_element(kind: str, n: int, rng: np.random.Generator) -> np.ndarray:
    if kind == "ginibre":
        return complex_gaussian(rng, (n, n))
    if kind == "gue_hermitian":
        g = complex_gaussian(rng, (n, n))
        return 0.5 * (g + adjoint(g))
    if kind == "haar_unitary":
        return haar_unitary(n, rng)
    if kind == "normal_random":
        u = haar_unitary(n, rng)
        return (u * complex_gaussian(rng, n)) @ adjoint(u)
    if kind == "jordan_nilpotent":
        return np.eye(n, k=1, dtype=np.complex128)
    if kind == "two_nilpotent":
        p = n // 2
        a = np.zeros((n, n), dtype=np.complex128)
        a[:p, p:] = complex_gaussian(rng, (p, n - p))
        u = haar_unitary(n, rng)
        return u @ a @ adjoint(u)
    raise ValueError(f"unknown ensemble kind {kind!r}")


def _frob(x) -> float:
    return float(np.linalg.norm(x))


def check_structure(kind: str, a: np.ndarray) -> None:
    """Assert the defining property of ``kind`` within STRUCTURE_TOL (relative)."""
    scale = max(operator_norm(a), np.finfo(float).tiny)
    n = a.shape[0]
    if kind == "gue_hermitian":
        err = _frob(a - adjoint(a)) / scale
    elif kind == "haar_unitary":
        err = _frob(adjoint(a) @ a - np.eye(n))
    elif kind == "normal_random":
        err = _frob(a @ adjoint(a) - adjoint(a) @ a) / scale**2
    elif kind == "jordan_nilpotent":
        err = _frob(np.linalg.matrix_power(a, n)) / scale**n
    elif kind == "two_nilpotent":
        err = operator_norm(a @ a) / scale**2
    else:
        return
    if err > STRUCTURE_TOL:
        raise AssertionError(f"{kind} draw violates its structure: residual {err:.2e}")


def sample_element(spec: EnsembleSpec, rng: np.random.Generator) -> np.ndarray:
    """One draw from ``spec``; structural property asserted, optionally rescaled to norm 1."""
    if spec.kind == "shifted_scaled":
        base = _raw_element(spec.base, spec.dim, rng)
        check_structure(spec.base, base)
        a = spec.scale * base + spec.shift * np.eye(spec.dim)
    else:
        a = _raw_element(spec.kind, spec.dim, rng)
        check_structure(spec.kind, a)
    if spec.normalize:
        norm = operator_norm(a)
        if norm > 0:
            a = a / norm
    return a


def sample_state(dim: int, rng: np.random.Generator, kind: str = "hilbert_schmidt") -> State:
    """Hilbert-Schmidt random density matrix G G* / tr(G G*), or a pure state."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if kind == "pure":
        return State.vector(complex_gaussian(rng, dim))
    if kind != "hilbert_schmidt":
        raise ValueError(f"unknown state kind {kind!r}")
    g = complex_gaussian(rng, (dim, dim))
    rho = g @ adjoint(g)
    return State(rho / np.trace(rho).real)


def sample_module_tuple(n: int, m: int, k: int, phi: State, rng: np.random.Generator, budget: int = 64):
    """k Gaussian m x n module elements and a z normalized so that phi(|z|^2) = 1.

    Degenerate z are rejected and redrawn (not perturbed) up to ``budget`` times.
    """
    if min(n, m, k) < 1:
        raise ValueError("n, m, k must be >= 1")
    xs = [complex_gaussian(rng, (m, n)) for _ in range(k)]
    for _ in range(budget):
        try:
            return xs, normalize_against_state(complex_gaussian(rng, (m, n)), phi)
        except DegenerateZ:
            continue
    raise ResampleBudgetExhausted(f"no usable z after {budget} draws; state may be pathological")


def sample_alpha(rng: np.random.Generator, grid=(2.0, 1.0, 1 + 1j, 0.5, 10.0), annulus=(0.1, 10.0)) -> complex:
    """Half the time a grid value, otherwise log-uniform modulus in the annulus with uniform phase."""
    if grid and rng.random() < 0.5:
        return complex(grid[rng.integers(len(grid))])
    lo, hi = annulus
    r = np.exp(rng.uniform(np.log(lo), np.log(hi)))
    return complex(r * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi)))

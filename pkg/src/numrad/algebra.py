"""Matrix C*-algebra primitives on M_n(C).

Elements are plain complex ``numpy`` arrays.  Every eigen- or
QR-factorization used anywhere in the package goes through the handful of
functions at the bottom of this module, so LAPACK is touched in one place.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import lapack

from .errors import ConvergenceError

DIM_CAP = 64


def as_element(a, dim_cap: int | None = DIM_CAP) -> np.ndarray:
    """Validate ``a`` as a finite square complex matrix and return it as complex128."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"algebra element must be square, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError("algebra element must have dim >= 1")
    if dim_cap is not None and arr.shape[0] > dim_cap:
        raise ValueError(f"dim {arr.shape[0]} exceeds cap {dim_cap}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("algebra element has non-finite entries")
    return arr


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def abs_square(a: np.ndarray) -> np.ndarray:
    """|a|^2 = a* a."""
    return adjoint(a) @ a


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + adjoint(a))


def is_normal(a: np.ndarray, rtol: float = 1e-12) -> bool:
    scale = max(operator_norm(a) ** 2, np.finfo(float).tiny)
    return bool(operator_norm(a @ adjoint(a) - adjoint(a) @ a) <= rtol * scale)


def operator_norm(a: np.ndarray) -> float:
    """Largest singular value, as sqrt of lambda_max(a* a)."""
    a = np.asarray(a, dtype=np.complex128)
    if not np.any(a):
        return 0.0
    lam, _ = hermitian_eigmax(abs_square(a))
    return float(np.sqrt(max(lam, 0.0)))


def spectral_radius(a: np.ndarray) -> float:
    return float(np.max(np.abs(full_spectrum(a))))


def matrix_power(a: np.ndarray, k: int) -> np.ndarray:
    """a^k by binary exponentiation."""
    if k < 1:
        raise ValueError("matrix_power needs k >= 1")
    result = None
    base = np.asarray(a, dtype=np.complex128)
    while k:
        if k & 1:
            result = base if result is None else result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


# --- the numerical trust boundary -------------------------------------------


def full_spectrum(a: np.ndarray) -> np.ndarray:
    """All eigenvalues of ``a`` with algebraic multiplicity (Hessenberg + shifted QR)."""
    try:
        return np.linalg.eigvals(np.asarray(a, dtype=np.complex128))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"general eigenvalue iteration failed: {exc}") from exc


def hermitian_eigmax(h: np.ndarray) -> tuple[float, np.ndarray]:
    """Largest eigenvalue of the Hermitian matrix ``h`` and a unit eigenvector.

    ``h`` is symmetrized first, which removes round-off asymmetry.
    """
    h = hermitian_part(np.asarray(h, dtype=np.complex128))
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"Hermitian eigensolver failed: {exc}") from exc
    return float(w[-1]), v[:, -1]


def hermitian_eigmin(h: np.ndarray) -> float:
    lam, _ = hermitian_eigmax(-np.asarray(h))
    return -lam


def hermitian_spectra(hs: np.ndarray, assume_hermitian: bool = False) -> np.ndarray:
    """Ascending eigenvalues of a stack of Hermitian matrices, shape (..., n).

    ``assume_hermitian`` skips symmetrization for stacks built Hermitian exactly.
    """
    hs = np.asarray(hs, dtype=np.complex128)
    if not assume_hermitian:
        hs = hermitian_part(hs)
    try:
        return np.linalg.eigvalsh(hs)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"batched Hermitian eigensolver failed: {exc}") from exc


def hermitian_eigh(hs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition of a stack of Hermitian matrices (ascending)."""
    try:
        return np.linalg.eigh(hermitian_part(np.asarray(hs, dtype=np.complex128)))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"batched Hermitian eigensolver failed: {exc}") from exc


def pencil_spectrum(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Finite eigenvalues of the pencil A - zB (QZ); infinite ones come back as inf."""
    alpha, beta, _, _, _, info = lapack.zggev(A, B, compute_vl=0, compute_vr=0)
    if info != 0:
        raise ConvergenceError(f"QZ iteration failed (zggev info={info})")
    out = np.full(alpha.shape, np.inf, dtype=np.complex128)
    finite = np.abs(beta) > 1e-14 * np.maximum(np.abs(alpha), 1.0)
    out[finite] = alpha[finite] / beta[finite]
    return out


def qr_decompose(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    try:
        return np.linalg.qr(np.asarray(g, dtype=np.complex128))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"QR factorization failed: {exc}") from exc

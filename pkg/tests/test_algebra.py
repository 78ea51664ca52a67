import numpy as np
import pytest
from hypothesis import given

from numrad.algebra import (
    abs_square,
    adjoint,
    as_element,
    full_spectrum,
    hermitian_eigmax,
    identity,
    is_normal,
    matrix_power,
    operator_norm,
    spectral_radius,
)
from numrad.ensembles import haar_unitary

from .conftest import complex_matrices

J2 = np.array([[0, 1], [0, 0]], dtype=complex)


def test_adjoint_examples():
    np.testing.assert_array_equal(adjoint(J2), [[0, 0], [1, 0]])
    np.testing.assert_array_equal(adjoint(identity(3)), identity(3))
    np.testing.assert_array_equal(adjoint(np.array([[1j]])), [[-1j]])


def test_abs_square_examples():
    np.testing.assert_array_equal(abs_square(J2), np.diag([0, 1]))
    np.testing.assert_array_equal(abs_square(identity(2)), identity(2))
    np.testing.assert_array_equal(abs_square(adjoint(J2)), np.diag([1, 0]))


def test_operator_norm_examples():
    assert operator_norm([[0, 2], [0, 0]]) == pytest.approx(2, rel=1e-15)
    assert operator_norm(identity(3)) == pytest.approx(1, rel=1e-15)
    assert operator_norm(np.diag([3, -4j])) == pytest.approx(4, rel=1e-15)
    assert operator_norm(np.zeros((3, 3))) == 0.0


def test_spectral_radius_examples():
    assert spectral_radius(J2) == 0.0
    assert spectral_radius(np.diag([2, -3])) == pytest.approx(3)
    u = haar_unitary(4, np.random.default_rng(0))
    assert spectral_radius(u) == pytest.approx(1, abs=1e-12)


def test_full_spectrum_examples():
    np.testing.assert_allclose(np.sort(full_spectrum(np.diag([1, 2, 3])).real), [1, 2, 3])
    np.testing.assert_allclose(full_spectrum(J2), [0, 0])
    ev = full_spectrum(np.array([[0, 1], [-1, 0]]))
    np.testing.assert_allclose(sorted(ev, key=lambda z: z.imag), [-1j, 1j], atol=1e-15)


def test_hermitian_eigmax_examples():
    lam, v = hermitian_eigmax(np.diag([1, 5, 2]))
    assert lam == pytest.approx(5)
    assert abs(v[1]) == pytest.approx(1)
    lam, v = hermitian_eigmax(np.array([[0, 1], [1, 0]]))
    assert lam == pytest.approx(1)
    np.testing.assert_allclose(np.abs(v), [2**-0.5, 2**-0.5])
    lam, v = hermitian_eigmax(identity(3))
    assert lam == pytest.approx(1) and np.linalg.norm(v) == pytest.approx(1)


def test_matrix_power_examples():
    np.testing.assert_array_equal(matrix_power(J2, 2), np.zeros((2, 2)))
    np.testing.assert_array_equal(matrix_power(identity(3), 7), identity(3))
    np.testing.assert_array_equal(matrix_power(np.diag([2, 3]), 3), np.diag([8, 27]))
    with pytest.raises(ValueError):
        matrix_power(J2, 0)


def test_as_element_rejects_bad_input():
    with pytest.raises(ValueError):
        as_element(np.ones((2, 3)))
    with pytest.raises(ValueError):
        as_element([[np.nan]])
    with pytest.raises(ValueError):
        as_element(np.eye(65))
    assert as_element(np.eye(65), dim_cap=None).shape == (65, 65)


@given(complex_matrices())
def test_c_star_identity(a):
    n = operator_norm(a)
    assert abs(operator_norm(abs_square(a)) - n**2) <= 1e-9 * n**2


@given(complex_matrices(dim=3), complex_matrices(dim=3))
def test_submultiplicative(a, b):
    scale = operator_norm(a) * operator_norm(b)
    assert operator_norm(a @ b) <= scale + 1e-9 * scale


@given(complex_matrices())
def test_spectral_radius_below_norm(a):
    n = operator_norm(a)
    assert spectral_radius(a) <= n + 1e-9 * n


@given(complex_matrices(max_dim=6))
def test_spectral_radius_equals_norm_for_normal(a):
    u = haar_unitary(a.shape[0], np.random.default_rng(abs(hash(a.tobytes())) % 2**32))
    normal = u @ np.diag(np.diag(a)) @ adjoint(u)
    assert is_normal(normal, rtol=1e-10)
    n = operator_norm(normal)
    assert abs(spectral_radius(normal) - n) <= 1e-8 * n


@given(complex_matrices())
def test_adjoint_involution(a):
    np.testing.assert_array_equal(adjoint(adjoint(a)), a)


@given(complex_matrices(max_dim=4))
def test_spectrum_of_powers(a):
    a = a / operator_norm(a)
    k = 3
    ev = full_spectrum(a) ** k
    evk = full_spectrum(matrix_power(a, k))
    # match multisets greedily
    remaining = list(evk)
    for z in ev:
        j = int(np.argmin([abs(z - w) for w in remaining]))
        assert abs(z - remaining.pop(j)) <= 1e-7

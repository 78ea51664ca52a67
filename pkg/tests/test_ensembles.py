import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from numrad.algebra import adjoint, operator_norm
from numrad.ensembles import (
    KINDS,
    EnsembleSpec,
    check_structure,
    haar_unitary,
    sample_alpha,
    sample_element,
    sample_module_tuple,
    sample_state,
    trial_rng,
)
from numrad.errors import ResampleBudgetExhausted
from numrad.states import State, abs_square_module, positive_value

from .conftest import rng_for, seeds

BASIC = [k for k in KINDS if k != "shifted_scaled"]


def test_trial_rng_is_order_free():
    a = trial_rng(42, 3, 17).standard_normal(4)
    trial_rng(42, 3, 16).standard_normal(100)
    b = trial_rng(42, 3, 17).standard_normal(4)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, trial_rng(42, 4, 17).standard_normal(4))
    assert not np.array_equal(a, trial_rng(43, 3, 17).standard_normal(4))


def test_spec_validation():
    with pytest.raises(ValueError):
        EnsembleSpec("wishart", 3)
    with pytest.raises(ValueError):
        EnsembleSpec("two_nilpotent", 1)
    with pytest.raises(ValueError):
        EnsembleSpec("shifted_scaled", 3)
    assert EnsembleSpec("ginibre", 3).label == "ginibre/n=3"


@given(seeds(), st.sampled_from(BASIC), st.integers(2, 8))
def test_structure_and_normalization(seed, kind, n):
    a = sample_element(EnsembleSpec(kind, n), rng_for(seed))
    assert a.shape == (n, n)
    assert operator_norm(a) == pytest.approx(1.0, abs=1e-12)
    check_structure(kind, a)


@given(seeds(), st.integers(1, 8))
def test_haar_unitary(seed, n):
    u = haar_unitary(n, rng_for(seed))
    np.testing.assert_allclose(adjoint(u) @ u, np.eye(n), atol=1e-12)


def test_haar_phases_are_uniform():
    # the first eigenphase statistic of a Haar U(1) draw is uniform on the circle
    z = np.array([haar_unitary(1, trial_rng(0, 0, t))[0, 0] for t in range(4000)])
    assert abs(z.mean()) < 0.05


def test_shifted_scaled():
    spec = EnsembleSpec("shifted_scaled", 3, base="haar_unitary", scale=2.0, shift=1j, normalize=False)
    a = sample_element(spec, rng_for(0))
    u = (a - 1j * np.eye(3)) / 2.0
    np.testing.assert_allclose(adjoint(u) @ u, np.eye(3), atol=1e-12)


def test_check_structure_rejects():
    with pytest.raises(AssertionError):
        check_structure("two_nilpotent", np.eye(2, dtype=complex))
    with pytest.raises(AssertionError):
        check_structure("gue_hermitian", np.eye(2, k=1, dtype=complex))


@given(seeds(), st.integers(1, 6), st.sampled_from(["hilbert_schmidt", "pure"]))
def test_sample_state(seed, n, kind):
    phi = sample_state(n, rng_for(seed), kind=kind)
    assert phi.dim == n
    assert np.trace(phi.rho).real == pytest.approx(1, abs=1e-12)
    assert np.linalg.eigvalsh(phi.rho).min() >= -1e-12


@given(seeds(), st.integers(1, 4), st.integers(1, 4), st.integers(2, 5))
def test_module_tuple_normalized(seed, n, m, k):
    rng = rng_for(seed)
    phi = sample_state(n, rng)
    xs, z = sample_module_tuple(n, m, k, phi, rng)
    assert len(xs) == k and all(x.shape == (m, n) for x in xs)
    assert positive_value(phi, abs_square_module(z)) == pytest.approx(1, abs=1e-10)


def test_module_tuple_budget():
    # a generator that only yields zeros can never produce a usable z
    phi = State.vector([1.0, 0.0])

    class ZeroRng:
        def standard_normal(self, shape):
            return np.zeros(shape)

    with pytest.raises(ResampleBudgetExhausted):
        sample_module_tuple(2, 1, 2, phi, ZeroRng(), budget=3)


def test_sample_alpha_ranges():
    rng = rng_for(1)
    draws = [sample_alpha(rng, grid=(), annulus=(1e-3, 0.1)) for _ in range(500)]
    assert all(1e-3 <= abs(a) <= 0.1 for a in draws)
    grid = (2.0, 1 + 1j)
    draws = [sample_alpha(rng, grid=grid) for _ in range(500)]
    assert sum(a in grid for a in draws) > 150

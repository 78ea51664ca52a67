import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from numrad.algebra import identity, operator_norm, spectral_radius
from numrad.ensembles import EnsembleSpec, sample_element, trial_rng
from numrad.radius import (
    check_norm_sandwich,
    default_grid_points,
    numerical_radii,
    numerical_radius,
    rotated_part_max,
    sandwich_holds,
    spectral_corollary_probe,
)

from .conftest import complex_matrices, rng_for, seeds

J2 = np.array([[0, 1], [0, 0]], dtype=complex)


def width_ok(enc, a, tol):
    return enc.width <= tol * max(1.0, operator_norm(a))


def test_rotated_part_max_examples():
    for theta in (0.0, 0.7, 2.0, 4.5):
        assert rotated_part_max(identity(2), theta) == pytest.approx(math.cos(theta), abs=1e-15)
        assert rotated_part_max(J2, theta) == pytest.approx(0.5, abs=1e-15)
    assert rotated_part_max(np.diag([1, -1]), 0.0) == pytest.approx(1)


def test_numerical_radius_examples():
    enc = numerical_radius(identity(2), tol=1e-10)
    assert enc.lower <= 1 <= enc.upper + 1e-15 and width_ok(enc, identity(2), 1e-10)
    enc = numerical_radius([[0, 2], [0, 0]], tol=1e-10)
    assert enc.lower == pytest.approx(1, abs=1e-10) and enc.certified


def test_jordan3_matches_dense_grid_oracle(radius_oracles):
    a, case = radius_oracles["jordan3"]
    enc = numerical_radius(a, tol=1e-10)
    assert case["value"] == pytest.approx(0.7071067811865476, abs=1e-12)
    assert abs(enc.lower - case["value"]) <= 1e-8
    assert enc.lower - 1e-12 <= case["grid_upper"]


@pytest.mark.parametrize("name", ["jordan4", "two_nilpotent_2x2_scaled", "diag_3_minus4i", "ginibre_2",
                                  "ginibre_3", "ginibre_4", "ginibre_5", "ginibre_6"])  # fmt: skip
def test_golden_cases(radius_oracles, name):
    a, case = radius_oracles[name]
    enc = numerical_radius(a, tol=1e-11)
    assert enc.certified
    # oracle values are lower bounds; the grid bound is rigorous from above
    assert enc.upper >= case["value"] - 1e-12 * max(1, operator_norm(a))
    assert enc.lower <= case["grid_upper"]
    assert abs(enc.midpoint - case["value"]) <= 1e-8 * max(1, operator_norm(a))


def test_enclosure_invariants_and_witness():
    a = rng_for(3).standard_normal((5, 5)) + 1j * rng_for(4).standard_normal((5, 5))
    enc = numerical_radius(a, tol=1e-10)
    assert 0 <= enc.lower <= enc.upper
    assert 0 <= enc.argmax_theta < 2 * math.pi
    w = enc.witness
    assert np.linalg.norm(w) == pytest.approx(1, abs=1e-12)
    assert abs(abs(np.vdot(w, a @ w)) - enc.lower) <= 1e-10 * operator_norm(a)
    d = enc.to_dict()
    assert set(d) == {"lower", "upper", "theta", "witness", "certified"}


def test_zero_matrix_short_circuits():
    enc = numerical_radius(np.zeros((3, 3)))
    assert enc.lower == enc.upper == 0.0 and enc.certified


def test_rejects_tiny_tol():
    with pytest.raises(ValueError):
        numerical_radius(identity(2), tol=1e-13)


def test_uncertified_is_flagged_not_hidden():
    # a starved level-set loop must not claim certification
    a = rng_for(11).standard_normal((6, 6)) + 1j * rng_for(12).standard_normal((6, 6))
    enc = numerical_radius(a, tol=1e-12, grid_points=8, max_iter=0)
    if enc.certified:
        assert enc.width <= 1e-12 * max(1, operator_norm(a))
    else:
        assert enc.upper >= enc.lower


def test_default_grid_points():
    assert default_grid_points(4) == 512 and default_grid_points(16) == 512 and default_grid_points(17) == 2048


def test_batched_equals_single():
    rng = rng_for(5)
    mats = [rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for n in (2, 3, 3, 5)]
    batched = numerical_radii(mats, tol=1e-11, grid_points=64)
    for a, enc in zip(mats, batched):
        single = numerical_radius(a, tol=1e-11, grid_points=64)
        assert single.lower == enc.lower and single.upper == enc.upper


def test_sandwich_examples():
    r = check_norm_sandwich(identity(3))
    assert sandwich_holds(r) and abs(r.components["upper_margin"]) <= 1e-10
    r = check_norm_sandwich(J2)
    assert sandwich_holds(r) and abs(r.components["lower_margin"]) <= 1e-10
    g = sample_element(EnsembleSpec("ginibre", 4, normalize=False), trial_rng(1, 0, 0))
    r = check_norm_sandwich(g)
    slack = 1e-9 * operator_norm(g)
    assert r.components["lower_margin"] >= -slack and r.components["upper_margin"] >= -slack


@given(complex_matrices(max_dim=5), st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_homogeneity(a, lam):
    e1 = numerical_radius(a, tol=1e-10)
    e2 = numerical_radius(lam * a, tol=1e-10)
    slack = e2.width + abs(lam) * e1.width + 1e-12 * abs(lam) * operator_norm(a)
    assert abs(e2.midpoint - abs(lam) * e1.midpoint) <= slack


@given(complex_matrices(dim=3), complex_matrices(dim=3))
def test_triangle_inequality(a, b):
    ea, eb, eab = numerical_radii([a, b, a + b], tol=1e-10)
    assert eab.lower <= ea.upper + eb.upper + 1e-12 * (operator_norm(a) + operator_norm(b))


@given(complex_matrices(max_dim=4), st.integers(2, 6))
def test_power_inequality(a, k):
    a = a / operator_norm(a)
    ea, ek = numerical_radii([a, np.linalg.matrix_power(a, k)], tol=1e-11)
    assert ek.lower <= ea.upper**k + 1e-8


@given(seeds(), st.integers(1, 6))
def test_normal_elements(seed, n):
    a = sample_element(EnsembleSpec("normal_random", n, normalize=False), rng_for(seed))
    enc = numerical_radius(a, tol=1e-11)
    norm = operator_norm(a)
    assert abs(enc.midpoint - norm) <= 1e-8 * norm
    assert spectral_radius(a) <= enc.upper + enc.width + 1e-12 * norm


@given(seeds(), st.sampled_from(["normal_random", "haar_unitary", "ginibre"]), st.integers(1, 5))
def test_radius_attaining_norm_equals_spectral_radius(seed, kind, n):
    a = sample_element(EnsembleSpec(kind, n), rng_for(seed))
    probe = spectral_corollary_probe(a)
    assert probe.holds
    if kind != "ginibre":
        assert probe.applicable

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grusskit.distance import (
    center_of_mass_limit,
    commutator_sup,
    dist_characterizations,
    dist_orthogonal_pairs,
    dist_sphere,
    dist_to_line,
    dist_to_scalars,
)
from grusskit.errors import DimensionError, PreconditionError
from grusskit.geometry import smallest_enclosing_disc, spectrum
from grusskit.linalg import DEFAULT_SETTINGS, spectral_norm
from grusskit.sphere import distance_objective, maximize_on_sphere, random_unit_vectors

from helpers import J2, ginibre, random_normal, seeds

D13 = np.diag([1.0, 3.0])


def sigma_max_grid(a, t, lo, hi, size):
    """Brute-force ``min ||A - lambda T||`` over a square grid of complex lambdas."""
    axis = np.linspace(lo, hi, size)
    lams = (axis[:, None] + 1j * axis[None, :]).ravel()
    vals = np.linalg.norm(a[None] - lams[:, None, None] * t[None], ord=2, axis=(1, 2))
    k = int(np.argmin(vals))
    return lams[k], float(vals[k])


# --------------------------------------------------------- direct distance


def test_hermitian_example():
    res = dist_to_scalars(D13)
    assert abs(res.c - 2) <= 1e-8 and abs(res.d - 1) <= 1e-8
    assert res.converged and not res.degenerate


def test_scalar_is_degenerate():
    res = dist_to_scalars((2 - 1j) * np.eye(3))
    assert res.degenerate and res.d == pytest.approx(0, abs=1e-15)
    assert res.c == pytest.approx(2 - 1j)


def test_j2_against_grid_oracle():
    lam, val = sigma_max_grid(J2, np.eye(2), -2, 2, 201)
    assert abs(lam) < 1e-12 and val == pytest.approx(1.0)
    res = dist_to_scalars(J2)
    assert abs(res.c) <= 1e-6 and res.d == pytest.approx(1.0, abs=1e-8)


def test_random_against_grid_oracle(rng):
    a = ginibre(rng, 3)
    res = dist_to_scalars(a)
    _, val = sigma_max_grid(a, np.eye(3), res.c.real - 0.05, res.c.real + 0.05, 101)
    # the grid is centered on Re(c) only, so compare values: the optimum never exceeds any grid value
    assert res.d <= val + 1e-12
    lams = res.c + 1e-4 * np.exp(2j * np.pi * np.arange(16) / 16)
    assert all(res.d <= spectral_norm(a - z * np.eye(3)) + 1e-12 for z in lams)


# ------------------------------------------------------------- sphere route


def test_sphere_example_diag13():
    t = np.linspace(0, np.pi / 2, 100_001)
    vals = (np.cos(t) ** 2 + 9 * np.sin(t) ** 2) - (np.cos(t) ** 2 + 3 * np.sin(t) ** 2) ** 2
    assert vals.max() == pytest.approx(1.0, abs=1e-9)
    assert t[np.argmax(vals)] == pytest.approx(np.pi / 4, abs=1e-4)
    res = dist_sphere(D13)
    assert res.d == pytest.approx(1.0, abs=1e-8)
    assert np.abs(res.x) == pytest.approx(np.full(2, 1 / np.sqrt(2)), abs=1e-4)


def test_sphere_example_j2():
    t, phi = np.meshgrid(np.linspace(0, np.pi / 2, 401), np.linspace(0, 2 * np.pi, 64))
    x = np.stack([np.cos(t).ravel(), (np.sin(t) * np.exp(1j * phi)).ravel()])
    vals, _ = distance_objective(J2)(x)
    np.testing.assert_allclose(vals, np.abs(x[1]) ** 4, atol=1e-14)
    res = dist_sphere(J2)
    assert res.d == pytest.approx(1.0, abs=1e-8)
    assert abs(res.x[1]) == pytest.approx(1.0, abs=1e-4)


def test_sphere_scalar():
    assert dist_sphere(5 * np.eye(3)).d == pytest.approx(0.0, abs=1e-7)


def test_gradient_matches_finite_differences(rng):
    a = ginibre(rng, 3)
    obj = distance_objective(a)
    x = random_unit_vectors(3, 1, rng)
    f0, g = obj(x)
    h = 1e-6
    for k in range(3):
        for direction in (1.0, 1j):
            e = np.zeros((3, 1), dtype=complex)
            e[k] = direction * h
            fp, _ = obj(x + e)
            fm, _ = obj(x - e)
            numeric = (fp[0] - fm[0]) / (2 * h)
            # directional derivative along e is Re <g, e> / h
            assert numeric == pytest.approx(np.real(np.vdot(g[:, 0], e[:, 0])) / h, abs=1e-6)


def test_maximize_on_sphere_rayleigh(rng):
    g = ginibre(rng, 5)
    h = g + g.conj().T

    def rayleigh(x):
        hx = h @ x
        return np.real(np.sum(x.conj() * hx, axis=0)), 2 * hx

    res = maximize_on_sphere(rayleigh, random_unit_vectors(5, 4, rng), gtol=1e-10)
    assert res.converged.all()
    np.testing.assert_allclose(res.values, np.linalg.eigvalsh(h)[-1], atol=1e-9)


# ------------------------------------------------------------ line distance


def test_line_example_identity_vs_diag12():
    axis = np.linspace(0, 1, 3001)
    vals = np.maximum(np.abs(1 - axis), np.abs(1 - 2 * axis))
    assert axis[np.argmin(vals)] == pytest.approx(2 / 3, abs=1e-3)
    res = dist_to_line(np.eye(2), np.diag([1.0, 2.0]))
    assert res.c == pytest.approx(2 / 3, abs=1e-7)
    assert res.d == pytest.approx(1 / 3, abs=1e-8)
    assert res.sphere_d == pytest.approx(1 / 3, abs=1e-6)
    assert center_of_mass_limit(np.eye(2), np.diag([1.0, 2.0])) == pytest.approx(2 / 3, abs=1e-5)


def test_line_same_matrix(rng):
    a = ginibre(rng, 3)
    res = dist_to_line(a, a)
    assert res.d == pytest.approx(0, abs=1e-8) and res.c == pytest.approx(1, abs=1e-7)
    assert center_of_mass_limit(2.5 * a, a) == pytest.approx(2.5, abs=1e-6)


def test_line_with_identity_matches_scalars(rng):
    a = ginibre(rng, 4)
    assert dist_to_line(a, np.eye(4)).d == pytest.approx(dist_to_scalars(a).d, abs=1e-8)


def test_center_of_mass_hermitian():
    assert center_of_mass_limit(D13, np.eye(2)) == pytest.approx(2.0, abs=1e-6)


def test_line_requires_invertible_t():
    with pytest.raises(PreconditionError):
        dist_to_line(np.eye(2), J2)
    with pytest.raises(DimensionError):
        dist_to_line(np.eye(2), np.eye(3))


def test_orthogonal_pairs_reach_distance(rng):
    a, t = ginibre(rng, 3), ginibre(rng, 3) + 3 * np.eye(3)
    assert dist_orthogonal_pairs(a, t) == pytest.approx(dist_to_line(a, t).d, abs=1e-6)


# --------------------------------------------------------- characterizations


@pytest.mark.parametrize("a, expected", [(3j * np.eye(2), 0.0), (D13, 1.0), (J2, 1.0)])
def test_characterization_examples(a, expected):
    res = dist_characterizations(a, DEFAULT_SETTINGS.replace(restarts=64))
    assert res.commutator_half_sup == pytest.approx(expected, abs=1e-6)
    assert res.rank_one_proj_sup == pytest.approx(expected, abs=1e-6)


def test_commutator_sup_returns_unitary(rng):
    val, x, _ = commutator_sup(ginibre(rng, 3), restarts=8)
    np.testing.assert_allclose(x.conj().T @ x, np.eye(3), atol=1e-10)
    assert val > 0


# --------------------------------------------------------------- properties


@given(seeds(), st.integers(2, 6))
@settings(max_examples=25)
def test_prasanna_equality(seed, n):
    a = ginibre(np.random.default_rng(seed), n)
    direct, sphere = dist_to_scalars(a), dist_sphere(a)
    assert direct.converged and sphere.converged
    assert abs(direct.d - sphere.d) <= 1e-6 * (1 + spectral_norm(a))


@given(seeds(), st.integers(2, 6))
@settings(max_examples=25)
def test_normal_distance_is_spectral_disc_radius(seed, n):
    a = random_normal(np.random.default_rng(seed), n)
    assert abs(dist_to_scalars(a).d - smallest_enclosing_disc(spectrum(a)).radius) <= 1e-6


@given(seeds(), st.integers(2, 6))
@settings(max_examples=25)
def test_hermitian_closed_form(seed, n):
    g = ginibre(np.random.default_rng(seed), n)
    h = g + g.conj().T
    ev = np.linalg.eigvalsh(h)
    res = dist_to_scalars(h)
    assert abs(res.d - (ev[-1] - ev[0]) / 2) <= 1e-8
    assert abs(res.c - (ev[-1] + ev[0]) / 2) <= 1e-8


@given(seeds(), st.integers(2, 5), st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False))
@settings(max_examples=20)
def test_shift_equivariance(seed, n, beta):
    a = ginibre(np.random.default_rng(seed), n)
    r0 = dist_to_scalars(a)
    r1 = dist_to_scalars(a - beta * np.eye(n))
    assert abs(r1.d - r0.d) <= 1e-8 * (1 + abs(beta))
    # the minimiser is unique but only square-root conditioned in the value
    assert abs(r1.c - (r0.c - beta)) <= 1e-4 * (1 + abs(beta))


@given(seeds(), st.integers(2, 5), st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False, allow_infinity=False))
@settings(max_examples=20)
def test_scaling(seed, n, gamma):
    a = ginibre(np.random.default_rng(seed), n)
    assert dist_to_scalars(gamma * a).d == pytest.approx(abs(gamma) * dist_to_scalars(a).d, rel=1e-8)


@given(seeds(), st.integers(2, 4))
@settings(max_examples=10)
def test_characterizations_sandwich(seed, n):
    a = ginibre(np.random.default_rng(seed), n)
    d = dist_to_scalars(a).d
    ch = dist_characterizations(a, DEFAULT_SETTINGS.replace(restarts=64))
    for v in ch[:2]:
        assert v <= d + 1e-8
        assert v >= d - 1e-4

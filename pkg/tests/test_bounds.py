import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grusskit.bounds import (
    BoundChainReport,
    h_factor,
    kantorovich_check,
    normal_chain,
    normaloid_corollary_chain,
    profile,
    refined_chain,
    renaud_bound,
    renaud_chain,
    renaud_k_chain,
    sup_estimate,
    transloid_chain,
)
from grusskit.errors import PreconditionError
from grusskit.linalg import DensityOperator, spectral_norm
from grusskit.variance import v_p

from helpers import J2, ginibre, haar, random_normal, random_state, seeds

D13 = np.diag([1.0, 3.0])
ROOTS4 = np.diag([1, 1j, -1, -1j])
HALF = DensityOperator.maximally_mixed(2)


def scaled_tol(a, t):
    return 1e-9 * (1 + spectral_norm(a) * spectral_norm(t))


# ---------------------------------------------------------------- examples


@pytest.mark.parametrize("a, expected", [(D13, 4.0), (2j * np.eye(2), 0.0), (J2, 1.0)])
def test_renaud_bound_examples(a, expected):
    assert renaud_bound(a, a) == pytest.approx(expected, abs=1e-8)


def test_refined_chain_scalar():
    rep = refined_chain(1.5 * np.eye(3), 1.5 * np.eye(3), DensityOperator.maximally_mixed(3))
    np.testing.assert_allclose(rep.values, 0, atol=1e-12)
    assert rep.all_hold


def test_refined_chain_diag13():
    # |tr(A^2/2) - tr(A/2)^2| = |5 - 4| = 1
    assert abs(np.trace(D13 @ D13) / 2 - (np.trace(D13) / 2) ** 2) == 1
    rep = refined_chain(D13, D13, HALF)
    v = rep.values
    assert v[0] == pytest.approx(1, abs=1e-12)
    assert v[1] >= 1 - 1e-12
    np.testing.assert_allclose(v[2:], [1, 1, 4, 4], atol=1e-8)
    assert rep.all_hold and len(rep.holds) == 5


def test_renaud_chain_two_terms(rng):
    a, t, p = ginibre(rng, 3), ginibre(rng, 3), random_state(rng, 3)
    rep = renaud_chain(a, t, p)
    assert rep.labels == ["|V_P(A,T)|", "4 R_A R_T"] and rep.all_hold


def test_normal_chain_examples():
    p4 = DensityOperator.maximally_mixed(4)
    rep = normal_chain(ROOTS4, ROOTS4, p4)
    assert rep.values[-1] == pytest.approx(1.0, abs=1e-10)
    # V = tr(A^2)/4 - (tr A / 4)^2 = 0 for the fourth roots of unity
    assert rep.values[0] == pytest.approx(abs(np.trace(ROOTS4 @ ROOTS4) / 4 - (np.trace(ROOTS4) / 4) ** 2), abs=1e-14)
    assert rep.all_hold and rep.links[-1] == "=="
    rep = normal_chain(D13, D13, HALF)
    assert rep.values[-1] == pytest.approx(1.0) and rep.values[-2] == pytest.approx(1.0, abs=1e-8)


def test_normal_chain_rejects_j2():
    with pytest.raises(PreconditionError) as info:
        normal_chain(J2, J2, HALF)
    assert info.value.residual == pytest.approx(1.0)


def test_transloid_examples(rng):
    a, t = random_normal(rng, 3), random_normal(rng, 3)
    p = random_state(rng, 3)
    shifts = [0, 1, 1j, -1j]
    assert transloid_chain(a, t, p, shifts).values == pytest.approx(normal_chain(a, t, p).values, abs=1e-12)
    with pytest.raises(PreconditionError, match="shift 0"):
        transloid_chain(J2, J2, HALF, [0])
    rep = transloid_chain(D13, D13, HALF, shifts)
    assert rep.values[-1] == pytest.approx(1.0) and rep.meta["transloid_check"] == "sampled"


@pytest.mark.parametrize("a, lam, expected", [(D13, 0.0, 2.0), (D13, 1.0, 1.0), (J2, 1.0, 2.0), (J2, 0.0, 2.0)])
def test_h_factor_examples(a, lam, expected):
    assert h_factor(a, lam) == pytest.approx(expected, abs=1e-4)


def test_h_factor_preconditions():
    with pytest.raises(PreconditionError):
        h_factor(3 * np.eye(2), 0.5)
    with pytest.raises(PreconditionError):
        h_factor(D13, 1.5)


def test_renaud_k_chain_examples():
    rep = renaud_k_chain(D13, D13, HALF, 1.0, 1.0)
    assert rep.meta["k"] == pytest.approx(1.0, abs=1e-8)
    assert rep.values[-1] == pytest.approx(1.0, abs=1e-8)
    assert rep.values[2] == pytest.approx(1.0, abs=1e-8)
    assert rep.meta["k_min_at"] == [1.0, 1.0]
    rep = renaud_k_chain(J2, J2, HALF, 1.0, 1.0)
    assert rep.meta["k"] == pytest.approx(4.0, abs=1e-4)
    assert rep.values[-1] == pytest.approx(1.0, abs=1e-4)
    assert rep.values[2] == pytest.approx(1.0, abs=1e-8)
    rep = renaud_k_chain(D13, D13, HALF, 0.0, 0.0)
    assert rep.meta["k"] == 4.0
    assert rep.values[-1] == pytest.approx(renaud_bound(D13, D13), abs=1e-10)


def test_renaud_k_chain_rejects_scalars():
    with pytest.raises(PreconditionError):
        renaud_k_chain(np.eye(2), D13, HALF)


def test_normaloid_examples(rng):
    g = ginibre(rng, 3)
    h1, h2 = g + g.conj().T, g @ g.conj().T
    p = random_state(rng, 3)
    rep = normaloid_corollary_chain(h1, h2, p, 1.0, 1.0)
    assert rep.meta["factor"] == 1.0 and rep.all_hold
    rep0 = normaloid_corollary_chain(h1, h2, p, 0.0, 0.0)
    assert rep0.values[-1] == pytest.approx(renaud_bound(h1, h2), abs=1e-10)
    u = haar(rng, 3)
    a = u @ np.diag(rng.standard_normal(3) + 1j * rng.standard_normal(3)) @ u.conj().T
    t = u @ np.diag(rng.standard_normal(3) + 1j * rng.standard_normal(3)) @ u.conj().T
    rep = normaloid_corollary_chain(a, t, p, 0.5, 0.5)
    assert rep.meta["factor"] == 2.25 and rep.all_hold


def test_normaloid_rejects_j2():
    with pytest.raises(PreconditionError):
        normaloid_corollary_chain(J2, J2, HALF)


def test_kantorovich_examples():
    res = kantorovich_check(np.diag([1.0, 4.0]), np.array([1, 1]) / np.sqrt(2))
    # <Ax,x> = 2.5, <A^-1 x,x> = 0.625; r_A = 1.5, r_{A^-1} = 0.375
    assert res.lhs == pytest.approx(abs(1 - 2.5 * 0.625), abs=1e-10)
    assert res.rhs == pytest.approx(1.5 * 0.375, abs=1e-10)
    assert res.lhs == pytest.approx(0.5625, abs=1e-10) and res.rhs == pytest.approx(0.5625, abs=1e-10)
    assert kantorovich_check(np.diag([1.0, 4.0]), [0, 1]).lhs == pytest.approx(0, abs=1e-15)
    res = kantorovich_check(np.eye(3), [1, 0, 0])
    assert res.lhs == pytest.approx(0, abs=1e-15) and res.rhs == pytest.approx(0, abs=1e-15)


def test_kantorovich_preconditions():
    with pytest.raises(PreconditionError):
        kantorovich_check(np.diag([-1.0, 4.0]), [1, 0])
    with pytest.raises(PreconditionError):
        kantorovich_check(np.diag([1.0, 4.0]), [1, 1])
    with pytest.raises(PreconditionError):
        kantorovich_check(J2 + np.eye(2), [1, 0])


def test_sup_estimate_includes_given_state(rng):
    a, t, p = ginibre(rng, 3), ginibre(rng, 3), random_state(rng, 3)
    assert sup_estimate(a, t, p).value >= abs(v_p(a, t, p))


def test_report_json_roundtrip(rng):
    a, t, p = ginibre(rng, 3), ginibre(rng, 3), random_state(rng, 3)
    rep = refined_chain(a, t, p)
    obj = json.loads(json.dumps(rep.to_json()))
    assert set(obj) == {"terms", "slacks", "holds", "meta"}
    back = BoundChainReport.from_json(obj)
    assert back.terms == rep.terms and back.links == rep.links and back.holds == rep.holds
    assert back.meta["fingerprint_A"] == rep.meta["fingerprint_A"]


def test_report_validation():
    with pytest.raises(ValueError):
        BoundChainReport([], [], 1e-9)
    with pytest.raises(ValueError):
        BoundChainReport([("a", 1.0), ("b", 2.0)], [], 1e-9)
    rep = BoundChainReport([("a", 1.0), ("b", 0.5)], ["<="], 1e-9)
    assert rep.holds == [False] and rep.worst_slack == -0.5
    assert "VIOLATED" in rep.table()


# --------------------------------------------------------------- properties


@given(seeds(), st.integers(2, 5))
@settings(max_examples=20)
def test_refined_chain_holds(seed, n):
    rng = np.random.default_rng(seed)
    a, t, p = ginibre(rng, n), ginibre(rng, n), random_state(rng, n)
    rep = refined_chain(a, t, p)
    assert min(rep.slacks) >= -scaled_tol(a, t)


@given(seeds(), st.integers(2, 5), st.floats(0, 1), st.floats(0, 1))
@settings(max_examples=20)
def test_k_in_range_and_chain_holds(seed, n, lam, mu):
    rng = np.random.default_rng(seed)
    a, t, p = ginibre(rng, n), ginibre(rng, n), random_state(rng, n)
    rep = renaud_k_chain(a, t, p, lam, mu, grid=5)
    assert 1 - 1e-9 <= rep.meta["k"] <= 4 + 1e-9
    assert 1 - 1e-9 <= rep.meta["k_min"] <= rep.meta["k"] + 1e-12
    assert min(rep.slacks) >= -scaled_tol(a, t)


@given(seeds(), st.integers(2, 5))
@settings(max_examples=20)
def test_h_affine_and_nonincreasing(seed, n):
    a = ginibre(np.random.default_rng(seed), n)
    prof = profile(a)
    lams = np.linspace(0, 1, 11)
    h = np.array([h_factor(a, x, prof=prof) for x in lams])
    assert h[0] == 2.0
    assert 1 - 1e-9 <= h[-1] <= 2 + 1e-9
    assert np.all(np.diff(h) <= 1e-12)
    np.testing.assert_allclose(h, 2 + lams * (h[-1] - 2), atol=1e-12)


@given(seeds(), st.integers(2, 5))
@settings(max_examples=15)
def test_theorem_at_zero_is_renaud(seed, n):
    rng = np.random.default_rng(seed)
    a, t, p = ginibre(rng, n), ginibre(rng, n), random_state(rng, n)
    pa, pt = profile(a), profile(t)
    rep = renaud_k_chain(a, t, p, 0.0, 0.0, profiles=(pa, pt), grid=2)
    assert abs(rep.values[-1] - renaud_bound(a, t, profiles=(pa, pt))) <= 1e-10


@given(seeds(), st.integers(2, 5))
@settings(max_examples=20)
def test_normal_equality_link(seed, n):
    rng = np.random.default_rng(seed)
    a, t, p = random_normal(rng, n), random_normal(rng, n), random_state(rng, n)
    rep = normal_chain(a, t, p)
    assert abs(rep.values[2] - rep.values[3]) <= 1e-6
    assert rep.all_hold


@given(
    seeds(),
    st.integers(2, 4),
    st.complex_numbers(min_magnitude=0.2, max_magnitude=5, allow_nan=False, allow_infinity=False),
    st.complex_numbers(min_magnitude=0.2, max_magnitude=5, allow_nan=False, allow_infinity=False),
)
@settings(max_examples=15)
def test_scaling_covariance(seed, n, gamma, delta):
    rng = np.random.default_rng(seed)
    a, t, p = ginibre(rng, n), ginibre(rng, n), random_state(rng, n)
    base = refined_chain(a, t, p)
    scaled = refined_chain(gamma * a, delta * t, p)
    factor = abs(gamma) * abs(delta)
    # the sup term is a sampled estimate, so skip it; the others are deterministic
    for k in (0, 2, 3, 4, 5):
        assert scaled.values[k] == pytest.approx(factor * base.values[k], rel=1e-6, abs=1e-9 * factor)
    assert scaled.all_hold and base.all_hold

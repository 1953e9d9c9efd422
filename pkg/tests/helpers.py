"""Shared generators and strategies for the test modules."""

import numpy as np
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from grusskit.linalg import DensityOperator

J2 = np.array([[0, 1], [0, 0]], dtype=complex)


def complex_matrices(min_dim=2, max_dim=5, scale=3.0):
    """Dense complex matrices with bounded finite entries."""
    elems = st.floats(-scale, scale, allow_nan=False, allow_infinity=False, width=64)

    def build(n):
        return st.tuples(arrays(np.float64, (n, n), elements=elems), arrays(np.float64, (n, n), elements=elems)).map(
            lambda ri: ri[0] + 1j * ri[1]
        )

    return st.integers(min_dim, max_dim).flatmap(build)


def seeds():
    return st.integers(0, 2**32 - 1)


def ginibre(rng, n):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def random_state(rng, n, rank=None):
    rank = n if rank is None else rank
    g = (rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank)))
    rho = g @ g.conj().T
    return DensityOperator(rho / np.trace(rho).real)


def haar(rng, n):
    q, r = np.linalg.qr(ginibre(rng, n))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_normal(rng, n):
    u = haar(rng, n)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return (u * z) @ u.conj().T

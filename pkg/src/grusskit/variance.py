"""Trace functionals of a state: ``V_P(A, T)``, the variance and related bounds."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .distance import dist_sphere
from .errors import DimensionError
from .linalg import DEFAULT_SETTINGS, DensityOperator, as_matrix, as_state, spectral_norm

__all__ = [
    "v_p",
    "variance",
    "variance_identities",
    "audenaert_max",
    "semi_inner",
    "dragomir_bound",
    "VarianceIdentities",
    "AudenaertMax",
    "DragomirBound",
]


def _pair(a, t, p):
    a = as_matrix(a, "A")
    t = as_matrix(t, "T")
    p = as_state(p)
    if a.shape != t.shape or a.shape != p.matrix.shape:
        raise DimensionError(f"dimension mismatch: {a.shape}, {t.shape}, {p.matrix.shape}")
    return a, t, p


def _tr_prod(x, y):
    # tr(X Y) without forming the product
    return complex(np.sum(x * y.T))


def v_p(a, t, p) -> complex:
    """``tr(PAT) - tr(PA) tr(PT)``."""
    a, t, p = _pair(a, t, p)
    pm = p.matrix
    return _tr_prod(pm, a @ t) - _tr_prod(pm, a) * _tr_prod(pm, t)


def variance(a, p) -> float:
    """``tr(|A|^2 P) - |tr(AP)|^2``, i.e. ``v_p(A*, A, P)``."""
    a = as_matrix(a)
    p = as_state(p)
    pm = p.matrix
    m = _tr_prod(a, pm)
    return float(_tr_prod(pm, a.conj().T @ a).real - abs(m) ** 2)


class VarianceIdentities(NamedTuple):
    v1: float
    v2: float
    v3: float


def variance_identities(a, p) -> VarianceIdentities:
    """Three Hilbert-Schmidt expressions of the variance.

    With ``S = P^{1/2}`` and ``x = AS``:

    * ``v1 = ||x||_2^2 - |<x, S>_2|^2``
    * ``v2 = ||x - <x, S>_2 S||_2^2``
    * ``v3 = (||x||^2 ||S||^2 - |<x, S>|^2) / ||S||^2``, the closed-form
      minimum of ``||x - lambda S||_2^2`` over ``lambda``.
    """
    a = as_matrix(a)
    p = as_state(p)
    s = p.sqrt
    x = a @ s
    xs = complex(np.vdot(s, x))  # <x, S>_2 = tr(x S*)
    xx = float(np.vdot(x, x).real)
    ss = float(np.vdot(s, s).real)
    v1 = xx - abs(xs) ** 2
    r = x - xs * s
    v2 = float(np.vdot(r, r).real)
    v3 = (xx * ss - abs(xs) ** 2) / ss
    return VarianceIdentities(v1, v2, v3)


class AudenaertMax(NamedTuple):
    state: DensityOperator
    value: float
    x: np.ndarray
    converged: bool


def audenaert_max(a, settings=DEFAULT_SETTINGS, starts=None) -> AudenaertMax:
    """Best variance over rank-one states ``x (x) x``.

    Reuses the sphere ascent of :func:`~grusskit.distance.dist_sphere`:
    the variance at ``x (x) x`` is ``||Ax||^2 - |<Ax, x>|^2``.
    """
    res = dist_sphere(a, settings, starts)
    state = DensityOperator.from_vector(res.x)
    return AudenaertMax(state, variance(a, state), res.x, res.converged)


def semi_inner(x, y, p) -> complex:
    """``(X, Y)_{2,P} = <P^{1/2} X, P^{1/2} Y>_2``."""
    x, y, p = _pair(x, y, p)
    s = p.sqrt
    return complex(np.vdot(s @ y, s @ x))


class DragomirBound(NamedTuple):
    middle: float
    outer: float


def dragomir_bound(a, t, p, lam=0.0, mu=0.0) -> DragomirBound:
    """Upper bounds for ``|v_p(A, T, P)|`` at the shifts ``lam``, ``mu``.

    ``middle`` uses the semi-inner product norms of ``A - lam I`` and
    ``T* - conj(mu) I``; ``outer`` replaces them by operator norms.  Both
    subtract ``|tr(P(A - lam I)) tr(P(T - mu I))|``.
    """
    a, t, p = _pair(a, t, p)
    eye = np.eye(a.shape[0])
    x = a - lam * eye
    y = t.conj().T - np.conj(mu) * eye
    sub = abs(_tr_prod(p.matrix, x) * _tr_prod(p.matrix, y.conj().T))
    nx = max(semi_inner(x, x, p).real, 0.0)
    ny = max(semi_inner(y, y, p).real, 0.0)
    middle = np.sqrt(nx) * np.sqrt(ny) - sub
    outer = spectral_norm(x) * spectral_norm(t - mu * eye) - sub
    return DragomirBound(float(middle), float(outer))

"""Distance from an operator to the scalar line ``C T`` and its centers of mass.

Two independent routes are computed for every distance:

* the direct convex problem ``min_lambda ||A - lambda T||`` (grid + Nelder-Mead);
* the sphere problem ``sup_x ||Ax||^2 - |<Ax, Tx>|^2 / ||Tx||^2`` (restarted
  Riemannian ascent), which can only under-estimate the distance squared.

Agreement of the two is the cross-check reported by the higher-level tools.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .errors import PreconditionError
from .geometry import FieldOfValues, numerical_radius
from .linalg import DEFAULT_SETTINGS, as_matrix, spectral_norm
from .sphere import distance_objective, maximize_on_sphere, random_unit_vectors

__all__ = [
    "ScalarDistance",
    "SphereDistance",
    "LineDistance",
    "Characterizations",
    "dist_to_scalars",
    "dist_sphere",
    "dist_to_line",
    "center_of_mass_limit",
    "dist_characterizations",
    "dist_orthogonal_pairs",
    "commutator_sup",
]


class ScalarDistance(NamedTuple):
    c: complex
    d: float
    converged: bool = True
    degenerate: bool = False


class SphereDistance(NamedTuple):
    x: np.ndarray
    d: float
    converged: bool
    n_converged: int


class LineDistance(NamedTuple):
    c: complex
    d: float
    sphere_d: float
    x: np.ndarray
    converged: bool


class Characterizations(NamedTuple):
    commutator_half_sup: float
    rank_one_proj_sup: float
    converged: bool


def _sigma_max_batch(a, t, lams):
    """``||A - lambda T||`` for an array of complex ``lams``."""
    m = a[None, :, :] - lams[:, None, None] * t[None, :, :]
    mh = np.conj(np.swapaxes(m, 1, 2))
    top = np.linalg.eigvalsh(mh @ m)[:, -1]
    return np.sqrt(np.maximum(top, 0.0))


def _sigma_max(m):
    return float(np.sqrt(max(np.linalg.eigvalsh(m.conj().T @ m)[-1], 0.0)))


def _minimize_pencil(a, t, radius, center=0.0, grid=11, candidates=()):
    """Minimise the convex ``f(lambda) = ||A - lambda T||`` over ``|lambda - center| <= radius``.

    Coarse square grid, then Nelder-Mead from the incumbent, restarted with
    a shrinking simplex until a restart no longer improves ``f``.  The
    objective is evaluated as ``sqrt(lambda_max(K - 2a X - 2b Y + |lambda|^2 T*T))``
    with ``K = A*A`` and ``X, Y`` the Hermitian and skew parts of ``T*A``.
    """
    axis = np.linspace(-radius, radius, grid)
    re, im = np.meshgrid(axis, axis)
    lams = (re + 1j * im).ravel() + center
    lams = lams[np.abs(lams - center) <= radius * (1 + 1e-12)]
    lams = np.concatenate([lams, np.asarray(candidates, dtype=complex), [center]])
    vals = _sigma_max_batch(a, t, lams)
    k = int(np.argmin(vals))
    best_lam, best_val = complex(lams[k]), float(vals[k])

    scale = 1.0 + spectral_norm(a)
    spacing = max(2.0 * radius / (grid - 1), 1e-8 * scale)
    k_mat = a.conj().T @ a
    ta = t.conj().T @ a
    x_mat = 0.5 * (ta + ta.conj().T)
    y_mat = -0.5j * (ta - ta.conj().T)
    tt = t.conj().T @ t
    eigvalsh = np.linalg.eigvalsh

    def f(v):
        re_, im_ = v
        m = k_mat - (2.0 * re_) * x_mat - (2.0 * im_) * y_mat + (re_ * re_ + im_ * im_) * tt
        return np.sqrt(max(eigvalsh(m)[-1], 0.0))

    converged = False
    for attempt in range(6):
        x0 = np.array([best_lam.real, best_lam.imag])
        simplex = np.array([x0, x0 + [spacing, 0.0], x0 + [0.0, spacing]])
        # the expanded form loses accuracy to cancellation when f is small
        # compared with ||A||; restarts use the direct evaluation
        fun = f if attempt == 0 else (lambda v: _sigma_max(a - complex(v[0], v[1]) * t))
        res = minimize(
            fun,
            x0,
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "xatol": 1e-12 * scale,
                "fatol": 1e-14 * scale,
                "maxiter": 4000,
                "maxfev": 8000,
            },
        )
        lam = complex(res.x[0], res.x[1])
        val = _sigma_max(a - lam * t)
        gain = best_val - val
        if val < best_val:
            best_lam, best_val = lam, val
        if gain <= 1e-14 * scale and attempt > 0:
            converged = bool(res.success) or gain <= 0
            break
        spacing = max(spacing * 1e-3, 1e-11 * scale)
    return best_lam, best_val, converged


def _polish_center(a, t, lam, val, settings, extra_starts=8):
    """Sharpen the minimiser of ``||A - lambda T||`` through the sphere problem.

    Value-based descent fixes ``lambda`` only to about ``sqrt(eps)`` along
    directions where ``f`` grows quadratically.  At the optimum the
    minimiser equals ``<Ay, Ty> / ||Ty||^2`` for a maximiser ``y`` of the
    sphere objective, and ``y`` can be driven to a tiny gradient, so this
    recovers ``lambda`` to near machine precision.  The ascent starts from
    the top right singular vectors of ``A - lambda T`` and random
    combinations of them.  The polished point is kept when ``f`` there is
    within ``1e-10 (1 + ||A||)`` of the incumbent value.
    """
    m = a - lam * t
    _, s, vh = np.linalg.svd(m)
    top = vh[s >= s[0] * (1.0 - 1e-4)].conj().T
    rng = np.random.default_rng(settings.seed)
    combos = top @ (rng.standard_normal((top.shape[1], extra_starts)) + 1j * rng.standard_normal((top.shape[1], extra_starts)))
    x0 = np.concatenate([top, combos], axis=1)
    scale = (1.0 + s[0]) ** 2
    res = maximize_on_sphere(distance_objective(m, t), x0, max_iters=3000, gtol=1e-13 * scale)
    k = int(np.argmax(res.values))
    y = res.x[:, k] / np.linalg.norm(res.x[:, k])
    ty = t @ y
    cand = lam + complex(np.vdot(ty, m @ y) / np.vdot(ty, ty))
    cval = _sigma_max(a - cand * t)
    nrm = 1.0 + spectral_norm(a)
    if cval > val + 1e-10 * nrm:
        return lam, val
    # ``cand`` is the sharper minimiser; the smaller value is the better
    # upper estimate of the distance itself
    return cand, min(cval, val)


def dist_to_scalars(a, settings=DEFAULT_SETTINGS, fov=None) -> ScalarDistance:
    """Distance from ``A`` to ``C Id`` and the minimiser ``c(A)`` (center of mass).

    Scalar matrices are detected first and short-circuited (``degenerate``).
    Otherwise ``f(lambda) = ||A - lambda I||`` is minimised over the disc
    ``|lambda| <= w(A)``, which contains the minimiser.
    """
    a = as_matrix(a)
    n = a.shape[0]
    eye = np.eye(n)
    c0 = complex(np.trace(a)) / n
    nrm = spectral_norm(a)
    d0 = spectral_norm(a - c0 * eye)
    if d0 <= settings.eps_deg * (1.0 + nrm):
        return ScalarDistance(c0, d0, True, True)
    fov = fov or FieldOfValues(a, settings.grid_angles)
    w = numerical_radius(a, settings, fov=fov)
    c, d, ok = _minimize_pencil(a, eye, max(w, 1e-12), candidates=[c0])
    c, d = _polish_center(a, eye, c, d, settings)
    return ScalarDistance(c, d, ok, False)


def _sphere_starts(n, restarts, seed, extra=None):
    rng = np.random.default_rng(seed)
    x0 = random_unit_vectors(n, restarts, rng)
    if extra is not None:
        x0 = np.concatenate([np.asarray(extra, dtype=complex).reshape(n, -1), x0], axis=1)
    return x0


def _sphere_run(a, t, settings, starts=None):
    n = a.shape[0]
    x0 = _sphere_starts(n, settings.restarts, settings.seed, starts)
    scale = 1.0 + spectral_norm(a) ** 2
    res = maximize_on_sphere(
        distance_objective(a, t), x0, max_iters=settings.max_iters, gtol=1e-7 * scale, prune_after=30
    )
    return res


def dist_sphere(a, settings=DEFAULT_SETTINGS, starts=None) -> SphereDistance:
    """``sqrt(sup_{||x||=1} ||Ax||^2 - |<Ax, x>|^2)`` by restarted sphere ascent.

    ``starts`` optionally adds initial vectors (columns) ahead of the
    ``settings.restarts`` seeded random ones.  The result is the best value
    found; ``converged`` refers to the winning restart.
    """
    a = as_matrix(a)
    res = _sphere_run(a, None, settings, starts)
    k = int(np.argmax(res.values))
    x = res.x[:, k]
    return SphereDistance(
        x / np.linalg.norm(x),
        float(np.sqrt(max(res.values[k], 0.0))),
        bool(res.converged[k]),
        int(res.converged.sum()),
    )


def _require_invertible(t, settings):
    smin = float(np.linalg.svd(t, compute_uv=False)[-1])
    thresh = 1e-8 * spectral_norm(t)
    if smin < thresh or smin == 0.0:
        raise PreconditionError("sigma_min(T)", smin, "T must be bounded below")
    return smin


def dist_to_line(a, t, settings=DEFAULT_SETTINGS) -> LineDistance:
    """``dist(A, C T)`` by the direct problem, cross-checked on the sphere.

    The direct minimiser of ``||A - lambda T||`` lies in
    ``|lambda| <= 2 ||A|| / sigma_min(T)``.
    """
    a = as_matrix(a, "A")
    t = as_matrix(t, "T")
    if a.shape != t.shape:
        from .errors import DimensionError

        raise DimensionError(f"dimension mismatch: {a.shape} vs {t.shape}")
    smin = _require_invertible(t, settings)
    radius = max(2.0 * spectral_norm(a) / smin, 1e-12)
    c, d, ok = _minimize_pencil(a, t, radius, grid=21)
    c, d = _polish_center(a, t, c, d, settings)
    sph = _sphere_run(a, t, settings)
    k = int(np.argmax(sph.values))
    sd = float(np.sqrt(max(sph.values[k], 0.0)))
    return LineDistance(c, d, sd, sph.x[:, k], ok and bool(sph.converged[k]))


def center_of_mass_limit(a, t, settings=DEFAULT_SETTINGS) -> complex:
    """``<A y, T y> / <T y, T y>`` at the sphere maximiser ``y``."""
    res = dist_to_line(a, t, settings)
    a = as_matrix(a)
    t = as_matrix(t)
    y = res.x
    ty = t @ y
    return complex(np.vdot(ty, a @ y) / np.vdot(ty, ty))


def dist_orthogonal_pairs(a, t, settings=DEFAULT_SETTINGS) -> float:
    """``sup |<Ax, y>|`` over unit ``x, y`` with ``<Tx, y> = 0``.

    For fixed ``x`` the best ``y`` is the normalised component of ``Ax``
    orthogonal to ``Tx``; ``x`` itself comes from the sphere ascent.
    """
    a = as_matrix(a)
    t = as_matrix(t)
    _require_invertible(t, settings)
    sph = _sphere_run(a, t, settings)
    best = 0.0
    for k in np.argsort(sph.values)[::-1][:4]:
        x = sph.x[:, k] / np.linalg.norm(sph.x[:, k])
        ax, tx = a @ x, t @ x
        r = ax - (np.vdot(tx, ax) / np.vdot(tx, tx)) * tx
        nr = np.linalg.norm(r)
        if nr == 0:
            continue
        y = r / nr
        best = max(best, abs(np.vdot(y, ax)))
    return float(best)


def commutator_sup(a, restarts=32, seed=0, max_iters=500, tol=1e-13):
    """Best found ``||AX - XA||`` over the operator-norm unit ball.

    The objective is convex in ``X``, so the supremum sits on a unitary.
    Alternating ascent: with ``X`` fixed take the top singular pair
    ``(u, v)`` of ``AX - XA``; with ``(u, v)`` fixed the unitary maximising
    ``Re u*(AX - XA)v = Re tr(X B)`` is the polar factor of ``B``.
    Returns ``(value, X, converged)``.
    """
    a = as_matrix(a)
    n = a.shape[0]
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((restarts, n, n)) + 1j * rng.standard_normal((restarts, n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    x = q * (d / np.abs(d))[:, None, :]
    scale = 1.0 + spectral_norm(a)
    prev = np.full(restarts, -np.inf)
    converged = False
    for _ in range(max_iters):
        m = a[None] @ x - x @ a[None]
        u, s, vh = np.linalg.svd(m)
        val = s[:, 0]
        if np.all(val - prev <= tol * scale):
            converged = True
            break
        prev = val
        u1 = u[:, :, 0]
        v1 = vh[:, 0, :].conj()
        vu = v1[:, :, None] * u1.conj()[:, None, :]
        b = vu @ a[None] - a[None] @ vu
        ub, _, vbh = np.linalg.svd(b)
        x = np.conj(np.swapaxes(vbh, 1, 2)) @ np.conj(np.swapaxes(ub, 1, 2))
    m = a[None] @ x - x @ a[None]
    vals = np.linalg.svd(m, compute_uv=False)[:, 0]
    k = int(np.argmax(vals))
    return float(vals[k]), x[k], converged


def dist_characterizations(a, settings=DEFAULT_SETTINGS) -> Characterizations:
    """Two lower-bound routes to ``dist(A, C Id)``.

    ``commutator_half_sup`` is half the best ``||AX - XA||`` over unit-norm
    ``X``; ``rank_one_proj_sup`` is the best ``||(I - Q) A Q||`` over
    rank-one projections ``Q = x x*``, with ``x`` from the sphere ascent.
    """
    a = as_matrix(a)
    n = a.shape[0]
    comm, _, ok1 = commutator_sup(a, settings.restarts, settings.seed, settings.max_iters)
    sph = _sphere_run(a, None, settings)
    eye = np.eye(n)
    best = 0.0
    for k in np.argsort(sph.values)[::-1][:4]:
        x = sph.x[:, k] / np.linalg.norm(sph.x[:, k])
        q = np.outer(x, x.conj())
        best = max(best, spectral_norm((eye - q) @ a @ q))
    ok2 = bool(sph.converged[int(np.argmax(sph.values))])
    return Characterizations(0.5 * comm, best, ok1 and ok2)

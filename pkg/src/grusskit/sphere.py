"""Batched Riemannian gradient ascent on the complex unit sphere.

Objectives take an ``(n, R)`` array of unit columns and return the values
``(R,)`` together with the Euclidean gradients ``2 df/dx̄`` as an ``(n, R)``
complex array.  All ``R`` starting points are iterated together.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

__all__ = ["SphereAscent", "maximize_on_sphere", "random_unit_vectors", "distance_objective"]


class SphereAscent(NamedTuple):
    x: np.ndarray  # (n, R) final iterates
    values: np.ndarray  # (R,)
    grad_norms: np.ndarray  # (R,)
    converged: np.ndarray  # (R,) bool
    iterations: int


_ROUNDING = 8.0 * np.finfo(float).eps


def random_unit_vectors(n, count, rng) -> np.ndarray:
    z = rng.standard_normal((n, count)) + 1j * rng.standard_normal((n, count))
    return z / np.linalg.norm(z, axis=0)


def _normalize(x):
    return x / np.linalg.norm(x, axis=0)


def _riemannian(x, g):
    return g - x * np.real(np.sum(x.conj() * g, axis=0))


def maximize_on_sphere(
    objective, x0, max_iters=2000, gtol=1e-10, step0=None, prune_after=None, prune_gap=1e-3,
    max_backtracks=40,
) -> SphereAscent:
    """Ascend ``objective`` from every column of ``x0``.

    Steps follow the Barzilai-Borwein rule with Armijo backtracking per
    column; the retraction is plain renormalisation.  A column is converged
    when its Riemannian gradient norm is at most ``gtol``.

    With ``prune_after`` set, columns whose value trails the best column by
    more than ``prune_gap`` (relative) after that many iterations are
    frozen; they keep ``converged=False``.
    """
    x = _normalize(np.asarray(x0, dtype=np.complex128))
    f, g = objective(x)
    rg = _riemannian(x, g)
    gn = np.linalg.norm(rg, axis=0)
    if step0 is None:
        step0 = 1.0 / (1.0 + np.max(np.abs(g)))
    alpha = np.full(x.shape[1], step0)
    it = 0
    stalled = np.zeros(x.shape[1], dtype=bool)
    for it in range(1, max_iters + 1):
        if prune_after is not None and it == prune_after:
            best = np.max(f)
            stalled |= f < best - prune_gap * (1.0 + abs(best))
        active = (gn > gtol) & ~stalled
        if not active.any():
            break
        a = alpha.copy()
        todo = active.copy()
        xn, fn, gnew = x.copy(), f.copy(), g.copy()
        for _ in range(max_backtracks):
            trial = _normalize(x[:, todo] + a[todo] * rg[:, todo])
            ft, gt = objective(trial)
            # the rounding allowance lets steps through once the Armijo gain
            # drops below the resolution of f (gradient norms under ~sqrt(eps))
            ok = ft >= f[todo] + 1e-4 * a[todo] * gn[todo] ** 2 - _ROUNDING * (1.0 + np.abs(f[todo]))
            cols = np.flatnonzero(todo)
            xn[:, cols[ok]] = trial[:, ok]
            fn[cols[ok]] = ft[ok]
            gnew[:, cols[ok]] = gt[:, ok]
            todo[cols[ok]] = False
            if not todo.any():
                break
            a[todo] *= 0.25
        stalled |= todo  # backtracking exhausted: no ascent direction left at this precision
        moved = active & ~todo
        rgn = _riemannian(xn, gnew)
        s = xn - x
        y = rgn - rg
        sy = np.real(np.sum(s.conj() * y, axis=0))
        ss = np.real(np.sum(s.conj() * s, axis=0))
        with np.errstate(divide="ignore", invalid="ignore"):
            bb = np.where(sy < 0, ss / -sy, 2.0 * a)
        bb = np.clip(bb, 1e-12, 1e12)
        alpha = np.where(moved, bb, alpha)
        x, f, g, rg = xn, fn, gnew, rgn
        gn = np.linalg.norm(rg, axis=0)
    return SphereAscent(x, f, gn, gn <= gtol, it)


def distance_objective(a, t=None):
    """Objective ``||Ax||^2 - |<Ax, Tx>|^2 / ||Tx||^2`` (``T = I`` when ``t`` is None).

    Its maximum over unit vectors is ``dist(A, C T)^2``.
    """
    ah = a.conj().T
    if t is None:

        def fun(x):
            ax = a @ x
            m = np.sum(x.conj() * ax, axis=0)
            val = np.sum(np.abs(ax) ** 2, axis=0) - np.abs(m) ** 2
            grad = 2.0 * (ah @ ax - m.conj() * ax - m * (ah @ x))
            return val, grad

        return fun

    th = t.conj().T

    def fun_t(x):
        ax = a @ x
        tx = t @ x
        s = np.sum(tx.conj() * ax, axis=0)
        q = np.sum(np.abs(tx) ** 2, axis=0)
        val = np.sum(np.abs(ax) ** 2, axis=0) - np.abs(s) ** 2 / q
        grad = 2.0 * (
            ah @ ax - (s.conj() * (th @ ax) + s * (ah @ tx)) / q + (np.abs(s) ** 2 / q**2) * (th @ tx)
        )
        return val, grad

    return fun_t

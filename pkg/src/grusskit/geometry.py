"""Spectrum, numerical range and enclosing discs.

The numerical range is handled through its support function: for an angle
``theta`` the Hermitian pencil ``H(theta) = (e^{-i theta} A + e^{i theta} A*) / 2``
has top eigenvalue ``h(theta) = max Re(e^{-i theta} W(A))`` and its top
eigenvector ``x`` gives the boundary point ``<A x, x>``.  Shifting ``A`` by a
scalar only shifts ``h``, so one batched eigen-decomposition on the angle grid
serves every shifted radius ``w(A - c)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConvergenceError, PreconditionError
from .linalg import DEFAULT_SETTINGS, as_matrix, spectral_norm

__all__ = [
    "Disc",
    "spectrum",
    "spectral_radius",
    "smallest_enclosing_disc",
    "numerical_range_boundary",
    "numerical_radius",
    "numerical_range_disc",
    "is_normaloid",
    "is_transloid_sampled",
    "FieldOfValues",
]


@dataclass(frozen=True)
class Disc:
    center: complex
    radius: float

    def __post_init__(self):
        if not (self.radius >= 0):
            raise ValueError(f"disc radius must be >= 0, got {self.radius}")
        if not np.isfinite(self.center):
            raise ValueError("disc center must be finite")
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))

    def contains(self, z, slack=1e-12) -> bool:
        return bool(np.all(np.abs(np.asarray(z) - self.center) <= self.radius + slack))

    def to_json(self) -> dict:
        return {"center": [self.center.real, self.center.imag], "radius": self.radius}

    @classmethod
    def from_json(cls, obj) -> Disc:
        re, im = obj["center"]
        return cls(complex(re, im), float(obj["radius"]))

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def points_to_json(points) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(points, dtype=complex)]


# ------------------------------------------------------------------ spectrum


def spectrum(a, eps_spec=1e-8, check=True) -> np.ndarray:
    """Eigenvalues of ``a`` with multiplicity.

    With ``check`` each eigenvalue must make ``A - lambda I`` numerically
    singular: ``sigma_min(A - lambda I) <= eps_spec * max(1, ||A||)``.
    """
    a = as_matrix(a)
    try:
        ev = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration failed: {exc}") from exc
    if check:
        n = a.shape[0]
        shifted = a[None, :, :] - ev[:, None, None] * np.eye(n)[None]
        smin = np.linalg.svd(shifted, compute_uv=False)[:, -1]
        bound = eps_spec * max(1.0, spectral_norm(a))
        if np.any(smin > bound):
            raise ConvergenceError(
                f"eigenvalue residual {smin.max():.3g} exceeds {bound:.3g}"
            )
    return ev


def spectral_radius(a) -> float:
    return float(np.max(np.abs(spectrum(a))))


# ------------------------------------------------------- smallest enclosing disc


def _circle_two(a, b):
    c = 0.5 * (a + b)
    return c, abs(a - c)


def _circle_three(a, b, c):
    # circumcircle through three points, None when (nearly) collinear
    bx, by = b.real - a.real, b.imag - a.imag
    cx, cy = c.real - a.real, c.imag - a.imag
    d = 2.0 * (bx * cy - by * cx)
    if d == 0.0:
        return None
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    center = complex(a.real + ux, a.imag + uy)
    r = max(abs(a - center), abs(b - center), abs(c - center))
    return center, r


def _fallback_three(a, b, c):
    return max((_circle_two(p, q) for p, q in ((a, b), (a, c), (b, c))), key=lambda d: d[1])


def _welzl(pts, slack):
    def inside(disc, z):
        return abs(z - disc[0]) <= disc[1] + slack

    disc = (pts[0], 0.0)
    for i in range(1, len(pts)):
        p = pts[i]
        if inside(disc, p):
            continue
        disc = (p, 0.0)
        for j in range(i):
            q = pts[j]
            if inside(disc, q):
                continue
            disc = _circle_two(p, q)
            for k in range(j):
                r = pts[k]
                if inside(disc, r):
                    continue
                three = _circle_three(p, q, r)
                disc = three if three is not None else _fallback_three(p, q, r)
    return disc


def smallest_enclosing_disc(points, eps_geo=1e-12, seed=0) -> Disc:
    """Minimal disc containing a finite set of complex points.

    Welzl's incremental algorithm on a randomly permuted copy of the input
    (fixed ``seed`` keeps the result deterministic).  Large inputs are
    handled by a core set: solve on a few extreme points, add every point
    left outside, repeat; the disc of a core set that covers all points is
    the disc of all points.  Membership tests use the slack
    ``eps_geo * (1 + max |z|)``.
    """
    pts = np.asarray(points, dtype=np.complex128).ravel()
    if pts.size == 0:
        raise ValueError("smallest_enclosing_disc needs at least one point")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    pts = np.unique(pts)
    if pts.size == 1:
        return Disc(pts[0], 0.0)
    rng = np.random.default_rng(seed)
    slack = eps_geo * (1.0 + float(np.max(np.abs(pts))))
    if pts.size <= 16:
        disc = _welzl(rng.permutation(pts).tolist(), slack)
        return Disc(disc[0], disc[1])
    mean = pts.mean()
    far = pts[np.argmax(np.abs(pts - mean))]
    core = {complex(far), complex(pts[np.argmax(np.abs(pts - far))])}
    while True:
        disc = _welzl(rng.permutation(np.array(sorted(core, key=lambda z: (z.real, z.imag)))).tolist(), slack)
        dist = np.abs(pts - disc[0])
        outside = np.flatnonzero(dist > disc[1] + slack)
        if outside.size == 0:
            return Disc(disc[0], disc[1])
        worst = outside[np.argsort(dist[outside])[::-1][:4]]
        size = len(core)
        core.update(complex(z) for z in pts[worst])
        if len(core) == size:
            # every point left outside is already in the core set, so it misses
            # the disc by rounding only; widen the radius to cover it
            return Disc(disc[0], float(np.max(dist)))


# ------------------------------------------------------------ numerical range


_TIGHT_SLACK = 4.0 * np.finfo(float).eps


class FarthestPoint(NamedTuple):
    value: float
    theta: float
    point: complex


class FieldOfValues:
    """Support-function sampler for the numerical range of one matrix."""

    def __init__(self, a, grid_angles=256):
        a = as_matrix(a)
        self.a = a
        self.n = a.shape[0]
        self.re = 0.5 * (a + a.conj().T)
        self.im = -0.5j * (a - a.conj().T)
        self.thetas = 2.0 * np.pi * np.arange(grid_angles) / grid_angles
        self.step = 2.0 * np.pi / grid_angles
        stack = (
            np.cos(self.thetas)[:, None, None] * self.re[None]
            + np.sin(self.thetas)[:, None, None] * self.im[None]
        )
        vals, vecs = np.linalg.eigh(stack)
        self.support = vals[:, -1]
        top = vecs[:, :, -1]
        self.points = np.einsum("ki,ij,kj->k", top.conj(), a, top)

    def pencil(self, theta):
        return np.cos(theta) * self.re + np.sin(theta) * self.im

    def top_pair(self, theta):
        w, v = np.linalg.eigh(self.pencil(theta))
        x = v[:, -1]
        return w[-1], complex(x.conj() @ self.a @ x)

    def farthest(self, c=0.0, cells=3) -> FarthestPoint:
        """Point of W(A) farthest from ``c``; ``value`` equals ``w(A - c I)``."""
        return self.candidates(c, cells)[0]

    def candidates(self, c=0.0, cells=3) -> list:
        """Refined local maxima of ``h(theta) - Re(e^{-i theta} c)``, best first.

        The ``cells`` best local maxima of the grid are refined by bounded
        Brent search (golden section with parabolic steps) within one grid
        step on either side.
        """
        c = complex(c)
        shift = np.cos(self.thetas) * c.real + np.sin(self.thetas) * c.imag
        g = self.support - shift
        k0 = int(np.argmax(g))
        grid_best = FarthestPoint(float(g[k0]), float(self.thetas[k0]), complex(self.points[k0]))
        if g.size < 3 or np.ptp(g) <= 1e-14 * (1.0 + abs(g[k0])):
            return [grid_best]
        peaks = np.flatnonzero((g >= np.roll(g, 1)) & (g >= np.roll(g, -1)))
        if peaks.size == 0:
            peaks = np.array([k0])
        peaks = peaks[np.argsort(g[peaks])[::-1][:cells]]

        def neg(t):
            return -(np.linalg.eigvalsh(self.pencil(t))[-1] - (np.cos(t) * c.real + np.sin(t) * c.imag))

        out = [grid_best]
        for k in peaks:
            t0 = self.thetas[k]
            res = minimize_scalar(
                neg,
                bounds=(t0 - self.step, t0 + self.step),
                method="bounded",
                options={"xatol": 1e-11},
            )
            if -res.fun >= g[k]:
                _, point = self.top_pair(res.x)
                out.append(FarthestPoint(float(-res.fun), float(res.x), point))
        out.sort(key=lambda fp: -fp.value)
        return out


def numerical_range_boundary(a, settings=DEFAULT_SETTINGS) -> np.ndarray:
    """Boundary points ``p(theta) = <A x_theta, x_theta>`` on the angle grid."""
    return FieldOfValues(a, settings.grid_angles).points.copy()


def numerical_radius(a, settings=DEFAULT_SETTINGS, fov=None) -> float:
    """``w(A) = max_theta lambda_max(H(theta))``."""
    fov = fov or FieldOfValues(a, settings.grid_angles)
    return max(fov.farthest(0.0).value, 0.0)


def numerical_range_disc(a, settings=DEFAULT_SETTINGS, fov=None, max_rounds=24) -> Disc:
    """Smallest disc enclosing the numerical range.

    The center comes from the smallest disc around the sampled boundary.
    The sampled polygon lies inside W(A), so its disc can be too small; the
    radius is therefore taken as ``w(A - center)``, which guarantees
    containment.  The refined local maxima are added to the sample and the
    disc recomputed until the two radii agree to rounding level.

    Near a two-point contact the radius grows only quadratically when the
    center moves along the bisector, so a radius gap ``g`` leaves the center
    uncertain by about ``sqrt(2 R g)``.  The inner discs are therefore solved
    with a membership slack at machine precision rather than ``eps_geo``.
    """
    fov = fov or FieldOfValues(a, settings.grid_angles)
    pts = list(fov.points)
    scale = 1.0 + float(np.max(np.abs(fov.points)))
    slack = _TIGHT_SLACK / (1.0 + float(np.max(np.abs(fov.points))))
    disc = smallest_enclosing_disc(pts, slack)
    cands = fov.candidates(disc.center)
    for _ in range(max_rounds):
        if cands[0].value - disc.radius <= 16 * _TIGHT_SLACK * scale:
            break
        pts.extend(fp.point for fp in cands)
        disc = smallest_enclosing_disc(pts, slack)
        cands = fov.candidates(disc.center)
    return Disc(disc.center, max(cands[0].value, disc.radius, 0.0))


# ------------------------------------------------------------ operator classes


class NormaloidCheck(NamedTuple):
    normaloid: bool
    residual: float


def is_normaloid(a, tol=1e-8) -> NormaloidCheck:
    """``r(A) = ||A||`` within ``tol`` relative; ``residual = (||A|| - r(A)) / ||A||``."""
    a = as_matrix(a)
    nrm = spectral_norm(a)
    if nrm == 0.0:
        return NormaloidCheck(True, 0.0)
    r = float(np.max(np.abs(spectrum(a, check=False))))
    res = max((nrm - r) / nrm, 0.0)
    return NormaloidCheck(res <= tol, res)


class TransloidCheck(NamedTuple):
    transloid: bool
    worst_shift: complex
    worst_residual: float


def is_transloid_sampled(a, shifts, tol=1e-8) -> TransloidCheck:
    """Necessary condition for transloid: ``A - mu I`` normaloid at every sampled ``mu``.

    This is a sampler, not a decision procedure.
    """
    a = as_matrix(a)
    shifts = list(shifts)
    if not shifts:
        raise ValueError("need at least one shift")
    eye = np.eye(a.shape[0])
    worst, worst_res = complex(shifts[0]), -1.0
    for mu in shifts:
        res = is_normaloid(a - mu * eye, tol).residual
        if res > worst_res:
            worst, worst_res = complex(mu), res
    return TransloidCheck(worst_res <= tol, worst, worst_res)


def require_normal(a, eps_norm, name="A"):
    a = as_matrix(a)
    scale = max(spectral_norm(a) ** 2, 1e-300)
    res = spectral_norm(a @ a.conj().T - a.conj().T @ a) / scale
    if res > eps_norm:
        raise PreconditionError("normality residual", res, f"{name} is not normal")
    return res

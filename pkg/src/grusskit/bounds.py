"""Evaluation of the Grüss-type bound chains for a pair of operators and a state.

Each chain function returns a :class:`BoundChainReport` whose terms are
ordered from the covariance-like left-hand side up to the weakest bound.
Every link between consecutive terms is either an inequality ``<=`` or an
equality ``==`` and carries its own pass flag.

The disc ``D(lambda_0, R_A)`` around ``W(A)`` is always the smallest
enclosing disc of the numerical range, so ``R_A = w(A - lambda_0 I)``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .distance import ScalarDistance, dist_to_scalars
from .errors import PreconditionError
from .geometry import (
    Disc,
    FieldOfValues,
    is_normaloid,
    is_transloid_sampled,
    numerical_range_disc,
    require_normal,
    smallest_enclosing_disc,
    spectrum,
)
from .linalg import DEFAULT_SETTINGS, as_matrix, as_state, hermitian_residual, spectral_norm
from .sphere import maximize_on_sphere, random_unit_vectors
from .variance import v_p

__all__ = [
    "BoundChainReport",
    "OperatorProfile",
    "SupEstimate",
    "profile",
    "sup_estimate",
    "renaud_bound",
    "refined_chain",
    "normal_chain",
    "transloid_chain",
    "h_factor",
    "renaud_k_chain",
    "normaloid_corollary_chain",
    "kantorovich_check",
    "k_sweep",
    "fingerprint",
]


def fingerprint(a) -> str:
    return hashlib.sha256(np.ascontiguousarray(a, dtype=np.complex128).tobytes()).hexdigest()[:16]


@dataclass
class BoundChainReport:
    """Ordered terms of a bound chain with per-link slack and verdict.

    ``links[i]`` relates ``terms[i]`` and ``terms[i + 1]``.  For ``<=`` the
    slack is ``terms[i+1] - terms[i]`` and the link holds when
    ``slack >= -tol_ineq``; for ``==`` the slack is ``-|difference|`` and the
    link holds when ``slack >= -tol_eq``.
    """

    terms: list
    links: list
    tol_ineq: float
    tol_eq: float = 1e-6
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.terms:
            raise ValueError("a chain needs at least one term")
        if len(self.links) != len(self.terms) - 1:
            raise ValueError("need one link per consecutive pair of terms")

    @property
    def values(self) -> list:
        return [v for _, v in self.terms]

    @property
    def labels(self) -> list:
        return [lab for lab, _ in self.terms]

    @property
    def slacks(self) -> list:
        out = []
        for (_, lo), (_, hi), kind in zip(self.terms, self.terms[1:], self.links):
            out.append(hi - lo if kind == "<=" else -abs(hi - lo))
        return out

    @property
    def holds(self) -> list:
        return [
            s >= -(self.tol_ineq if kind == "<=" else self.tol_eq)
            for s, kind in zip(self.slacks, self.links)
        ]

    @property
    def all_hold(self) -> bool:
        return all(self.holds)

    @property
    def worst_slack(self) -> float:
        return min(self.slacks) if self.slacks else 0.0

    def to_json(self) -> dict:
        return {
            "terms": [{"label": lab, "value": float(v)} for lab, v in self.terms],
            "slacks": [float(s) for s in self.slacks],
            "holds": [bool(h) for h in self.holds],
            "meta": {
                **self.meta,
                "links": list(self.links),
                "tolerances": {"ineq": self.tol_ineq, "eq": self.tol_eq},
            },
        }

    @classmethod
    def from_json(cls, obj) -> BoundChainReport:
        meta = dict(obj.get("meta", {}))
        links = meta.pop("links", ["<="] * (len(obj["terms"]) - 1))
        tols = meta.pop("tolerances", {"ineq": 1e-9, "eq": 1e-6})
        terms = [(t["label"], float(t["value"])) for t in obj["terms"]]
        return cls(terms, links, float(tols["ineq"]), float(tols["eq"]), meta)

    def table(self) -> str:
        width = max(len(lab) for lab in self.labels)
        lines = [f"   {self.labels[0]:<{width}}  {self.values[0]:.12g}"]
        for (lab, v), kind, s, ok in zip(self.terms[1:], self.links, self.slacks, self.holds):
            flag = "ok" if ok else "VIOLATED"
            lines.append(f"{kind:<3}{lab:<{width}}  {v:<18.12g} slack {s:+.3e}  {flag}")
        return "\n".join(lines)


# ------------------------------------------------------------------ profiles


@dataclass
class OperatorProfile:
    """Per-operator quantities shared by all chains."""

    matrix: np.ndarray
    norm: float
    disc: Disc  # smallest disc around W(A): (lambda_0, R_A)
    w_shift: float  # w(A - lambda_0 I)
    norm_shift: float  # ||A - lambda_0 I||
    dist: ScalarDistance  # c(A), dist(A, C Id)

    @property
    def center(self) -> complex:
        return self.disc.center

    @property
    def radius(self) -> float:
        return self.disc.radius


def profile(a, settings=DEFAULT_SETTINGS) -> OperatorProfile:
    a = as_matrix(a)
    fov = FieldOfValues(a, settings.grid_angles)
    disc = numerical_range_disc(a, settings, fov=fov)
    w_shift = fov.farthest(disc.center).value
    eye = np.eye(a.shape[0])
    dist = dist_to_scalars(a, settings, fov=fov)
    return OperatorProfile(
        a, spectral_norm(a), disc, max(w_shift, 0.0), spectral_norm(a - disc.center * eye), dist
    )


def _profiles(a, t, settings, profiles):
    if profiles is not None:
        return profiles
    pa = profile(a, settings)
    pt = pa if t is a else profile(t, settings)
    return pa, pt


# --------------------------------------------------------------- sup estimate


class SupEstimate(NamedTuple):
    value: float
    source: str


def _covariance_objective(a, t):
    at = a @ t
    ah, th, ath = a.conj().T, t.conj().T, at.conj().T

    def fun(x):
        ax, tx, atx = a @ x, t @ x, at @ x
        ma = np.sum(x.conj() * ax, axis=0)
        mt = np.sum(x.conj() * tx, axis=0)
        v = np.sum(x.conj() * atx, axis=0) - ma * mt
        dv = atx - mt * ax - ma * tx
        dvbar = ath @ x - mt.conj() * (ah @ x) - ma.conj() * (th @ x)
        grad = 2.0 * (v.conj() * dv + v * dvbar)
        return np.abs(v) ** 2, grad

    return fun


def sup_estimate(a, t, p=None, settings=DEFAULT_SETTINGS, restarts=4, iters=30, random_states=8):
    """Lower estimate of ``sup_P |V_P(A, T)|`` over states.

    Candidates: the given state ``p``, rank-one states from a short sphere
    ascent on ``|V_x|^2`` and seeded random full-rank states.  Including
    ``p`` makes ``|V_P| <= estimate`` hold by construction.
    """
    a = as_matrix(a)
    t = as_matrix(t)
    n = a.shape[0]
    best = SupEstimate(0.0, "none")
    if p is not None:
        best = SupEstimate(abs(v_p(a, t, p)), "given")
    rng = np.random.default_rng(settings.seed)
    if restarts > 0:
        x0 = random_unit_vectors(n, restarts, rng)
        res = maximize_on_sphere(_covariance_objective(a, t), x0, max_iters=iters, gtol=0.0)
        k = int(np.argmax(res.values))
        val = float(np.sqrt(max(res.values[k], 0.0)))
        if val > best.value:
            best = SupEstimate(val, "rank-one")
    if random_states > 0:
        g = (rng.standard_normal((random_states, n, n)) + 1j * rng.standard_normal((random_states, n, n)))
        rho = g @ np.conj(np.swapaxes(g, 1, 2))
        rho /= np.trace(rho, axis1=1, axis2=2).real[:, None, None]
        at = a @ t
        tr = lambda m: np.einsum("kij,ji->k", rho, m)  # noqa: E731
        vals = np.abs(tr(at) - tr(a) * tr(t))
        k = int(np.argmax(vals))
        if vals[k] > best.value:
            best = SupEstimate(float(vals[k]), "random")
    return best


# --------------------------------------------------------------------- chains


def _tol(settings, pa, pt):
    return settings.eps_ineq * (1.0 + pa.norm * pt.norm)


def _meta(a, t, settings, **extra):
    return {
        "dim": int(a.shape[0]),
        "seed": int(settings.seed),
        "fingerprint_A": fingerprint(a),
        "fingerprint_T": fingerprint(t),
        **extra,
    }


def _lhs_and_sup(a, t, p, settings, sup):
    lhs = abs(v_p(a, t, p))
    if sup is None:
        sup = sup_estimate(a, t, p, settings).value
    return lhs, max(sup, lhs)


def _radii(a, t, settings, profiles):
    if profiles is not None:
        return profiles[0].radius, profiles[1].radius
    ra = numerical_range_disc(a, settings).radius
    rt = ra if t is a else numerical_range_disc(t, settings).radius
    return ra, rt


def renaud_bound(a, t, settings=DEFAULT_SETTINGS, profiles=None) -> float:
    """``4 R_A R_T`` with the smallest discs around ``W(A)``, ``W(T)``.

    Only the two discs are computed unless ``profiles`` are supplied.
    """
    a, t = as_matrix(a, "A"), as_matrix(t, "T")
    ra, rt = _radii(a, t, settings, profiles)
    return 4.0 * ra * rt


def renaud_chain(a, t, p, settings=DEFAULT_SETTINGS, profiles=None) -> BoundChainReport:
    a, t, p = as_matrix(a, "A"), as_matrix(t, "T"), as_state(p)
    ra, rt = _radii(a, t, settings, profiles)
    terms = [("|V_P(A,T)|", abs(v_p(a, t, p))), ("4 R_A R_T", 4.0 * ra * rt)]
    tol = settings.eps_ineq * (1.0 + spectral_norm(a) * spectral_norm(t))
    return BoundChainReport(terms, ["<="], tol, settings.eps_eq, _meta(a, t, settings, chain="renaud"))


def refined_chain(a, t, p, settings=DEFAULT_SETTINGS, profiles=None, sup=None) -> BoundChainReport:
    """Six-term chain from ``|V_P(A,T)|`` up to ``4 R_A R_T``."""
    a, t, p = as_matrix(a, "A"), as_matrix(t, "T"), as_state(p)
    pa, pt = _profiles(a, t, settings, profiles)
    lhs, sup = _lhs_and_sup(a, t, p, settings, sup)
    terms = [
        ("|V_P(A,T)|", lhs),
        ("sup_P |V_P(A,T)|", sup),
        ("dist(A) dist(T)", pa.dist.d * pt.dist.d),
        ("||A-l0|| ||T-m0||", pa.norm_shift * pt.norm_shift),
        ("4 w(A-l0) w(T-m0)", 4.0 * pa.w_shift * pt.w_shift),
        ("4 R_A R_T", 4.0 * pa.radius * pt.radius),
    ]
    meta = _meta(a, t, settings, chain="refined", l0=[pa.center.real, pa.center.imag], m0=[pt.center.real, pt.center.imag])
    return BoundChainReport(terms, ["<="] * 5, _tol(settings, pa, pt), settings.eps_eq, meta)


def _enclosing_radius_of_spectrum(a):
    return smallest_enclosing_disc(spectrum(a)).radius


def _spectral_chain(a, t, p, settings, profiles, sup, chain, extra_meta):
    pa, pt = _profiles(a, t, settings, profiles)
    lhs, sup = _lhs_and_sup(a, t, p, settings, sup)
    ra = _enclosing_radius_of_spectrum(a)
    rt = ra if t is a else _enclosing_radius_of_spectrum(t)
    terms = [
        ("|V_P(A,T)|", lhs),
        ("sup_P |V_P(A,T)|", sup),
        ("dist(A) dist(T)", pa.dist.d * pt.dist.d),
        ("r_A r_T", ra * rt),
    ]
    meta = _meta(a, t, settings, chain=chain, r_A=ra, r_T=rt, **extra_meta)
    return BoundChainReport(terms, ["<=", "<=", "=="], _tol(settings, pa, pt), settings.eps_eq, meta)


def normal_chain(a, t, p, settings=DEFAULT_SETTINGS, profiles=None, sup=None) -> BoundChainReport:
    """Chain for normal operators, closing with the equality ``dist dist = r_A r_T``.

    ``r_S`` is the radius of the smallest disc containing the spectrum.
    Raises :class:`PreconditionError` when either operator is not normal.
    """
    a, t, p = as_matrix(a, "A"), as_matrix(t, "T"), as_state(p)
    res_a = require_normal(a, settings.eps_norm, "A")
    res_t = require_normal(t, settings.eps_norm, "T")
    return _spectral_chain(a, t, p, settings, profiles, sup, "normal", {"normality_residuals": [res_a, res_t]})


def transloid_chain(a, t, p, shifts, settings=DEFAULT_SETTINGS, profiles=None, sup=None, tol=1e-8) -> BoundChainReport:
    """Same chain as :func:`normal_chain` under a sampled transloid test.

    ``A - mu I`` and ``T - mu I`` must be normaloid at every sampled shift.
    In finite dimension this class is the normal matrices, so the sample is
    a necessary-condition screen only.
    """
    a, t, p = as_matrix(a, "A"), as_matrix(t, "T"), as_state(p)
    checks = {}
    for name, m in (("A", a), ("T", t)):
        chk = is_transloid_sampled(m, shifts, tol)
        if not chk.transloid:
            raise PreconditionError(
                "normaloid residual", chk.worst_residual, f"{name} fails the transloid sample at shift {chk.worst_shift}"
            )
        checks[name] = chk.worst_residual
    meta = {
        "transloid_check": "sampled",
        "shifts": [[complex(s).real, complex(s).imag] for s in shifts],
        "worst_residuals": checks,
        "note": "finite-dimensional transloid matrices are normal",
    }
    return _spectral_chain(a, t, p, settings, profiles, sup, "transloid", meta)


def _require_nonscalar(pa, settings, name):
    if pa.dist.degenerate or pa.dist.d <= settings.eps_deg * (1.0 + pa.norm):
        raise PreconditionError("dist to scalars", pa.dist.d, f"{name} is a scalar multiple of Id")


def h_factor(a, lam, settings=DEFAULT_SETTINGS, prof=None) -> float:
    """``2 (1 - lam) + lam ||A - c(A) I|| / w(A - lambda_0 I)`` for ``lam`` in [0, 1]."""
    if not 0.0 <= lam <= 1.0:
        raise PreconditionError("lambda outside [0, 1]", float(lam))
    prof = prof or profile(a, settings)
    _require_nonscalar(prof, settings, "A")
    return 2.0 * (1.0 - lam) + lam * prof.dist.d / prof.w_shift


def k_sweep(pa, pt, grid=11, settings=DEFAULT_SETTINGS):
    """``(lam, mu, h_lam(A), h_mu(T))`` rows over a uniform grid on [0, 1]^2."""
    pts = np.linspace(0.0, 1.0, grid)
    ha = [h_factor(pa.matrix, lam, settings, pa) for lam in pts]
    ht = [h_factor(pt.matrix, mu, settings, pt) for mu in pts]
    return [(lam, mu, ha[i], ht[j]) for i, lam in enumerate(pts) for j, mu in enumerate(pts)]


def renaud_k_chain(a, t, p, lam=1.0, mu=1.0, settings=DEFAULT_SETTINGS, profiles=None, sup=None, grid=11) -> BoundChainReport:
    """Parametric chain with ``k(A, T) = h_lam(A) h_mu(T)``.

    The report's meta carries ``k`` and the smallest ``k`` over a ``grid x grid``
    sweep of ``(lam, mu)`` together with where it is attained.
    """
    a, t, p = as_matrix(a, "A"), as_matrix(t, "T"), as_state(p)
    pa, pt = _profiles(a, t, settings, profiles)
    _require_nonscalar(pa, settings, "A")
    _require_nonscalar(pt, settings, "T")
    lhs, sup = _lhs_and_sup(a, t, p, settings, sup)
    ha = h_factor(a, lam, settings, pa)
    ht = h_factor(t, mu, settings, pt)
    k = ha * ht
    rows = k_sweep(pa, pt, grid, settings)
    kmin_row = min(rows, key=lambda r: r[2] * r[3])
    terms = [
        ("|V_P(A,T)|", lhs),
        ("sup_P |V_P(A,T)|", sup),
        ("dist(A) dist(T)", pa.dist.d * pt.dist.d),
        ("k w(A-l0) w(T-m0)", (ha * pa.w_shift) * (ht * pt.w_shift)),
        ("k R_A R_T", k * pa.radius * pt.radius),
    ]
    meta = _meta(
        a, t, settings, chain="theorem", lam=lam, mu=mu, h_lambda=ha, h_mu=ht, k=k,
        k_min=kmin_row[2] * kmin_row[3], k_min_at=[kmin_row[0], kmin_row[1]],
    )
    return BoundChainReport(terms, ["<="] * 4, _tol(settings, pa, pt), settings.eps_eq, meta)


def normaloid_corollary_chain(a, t, p, lam=1.0, mu=1.0, settings=DEFAULT_SETTINGS, profiles=None, sup=None, tol=1e-8) -> BoundChainReport:
    """Chain with factor ``(2 - lam)(2 - mu)`` for normaloid shifted operators."""
    a, t, p = as_matrix(a, "A"), as_matrix(t, "T"), as_state(p)
    if not (0.0 <= lam <= 1.0 and 0.0 <= mu <= 1.0):
        raise PreconditionError("lambda/mu outside [0, 1]", float(max(abs(lam), abs(mu))))
    pa, pt = _profiles(a, t, settings, profiles)
    eye = np.eye(a.shape[0])
    for name, pr in (("A", pa), ("T", pt)):
        chk = is_normaloid(pr.matrix - pr.center * eye, tol)
        if not chk.normaloid:
            raise PreconditionError("normaloid residual", chk.residual, f"{name} - center I is not normaloid")
    lhs, sup = _lhs_and_sup(a, t, p, settings, sup)
    factor = (2.0 - lam) * (2.0 - mu)
    terms = [
        ("|V_P(A,T)|", lhs),
        ("sup_P |V_P(A,T)|", sup),
        ("dist(A) dist(T)", pa.dist.d * pt.dist.d),
        ("(2-l)(2-m) w w", factor * pa.w_shift * pt.w_shift),
        ("(2-l)(2-m) R_A R_T", factor * pa.radius * pt.radius),
    ]
    meta = _meta(a, t, settings, chain="normaloid", lam=lam, mu=mu, factor=factor)
    return BoundChainReport(terms, ["<="] * 4, _tol(settings, pa, pt), settings.eps_eq, meta)


class KantorovichCheck(NamedTuple):
    lhs: float
    rhs: float


def kantorovich_check(a, x, eps_pd=1e-12, eps_vec=1e-9) -> KantorovichCheck:
    """``|1 - <Ax,x><A^{-1}x,x>|`` against ``r_A r_{A^{-1}}`` for positive definite ``A``."""
    a = as_matrix(a)
    res = hermitian_residual(a)
    if res > 1e-9 * (1.0 + spectral_norm(a)):
        raise PreconditionError("hermitian residual", res)
    a = 0.5 * (a + a.conj().T)
    ev = np.linalg.eigvalsh(a)
    if ev[0] < eps_pd:
        raise PreconditionError("min eigenvalue", float(ev[0]), "A must be positive definite")
    x = np.asarray(x, dtype=np.complex128).ravel()
    if abs(np.linalg.norm(x) - 1.0) > eps_vec:
        raise PreconditionError("vector norm deviation", abs(np.linalg.norm(x) - 1.0))
    ainv = np.linalg.inv(a)
    lhs = abs(1.0 - np.vdot(x, a @ x) * np.vdot(x, ainv @ x))
    rhs = smallest_enclosing_disc(ev).radius * smallest_enclosing_disc(1.0 / ev).radius
    return KantorovichCheck(float(lhs), float(rhs))

"""Dense complex matrix kernels.

Every other module works on plain ``numpy.ndarray`` objects of dtype
``complex128``; :func:`as_matrix` is the single validation gate.  States are
wrapped in :class:`DensityOperator` so that positivity and unit trace are
checked once, at construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, DimensionError, NotHermitianError, PreconditionError

__all__ = [
    "OptimizerSettings",
    "DensityOperator",
    "TraceFunctionals",
    "as_matrix",
    "hermitian_eig",
    "jacobi_eigh",
    "spectral_norm",
    "abs_value",
    "psd_sqrt",
    "trace",
    "schatten_norm",
    "hs_inner",
    "trace_functionals",
    "matrix_to_json",
    "matrix_from_json",
    "load_matrix",
    "save_matrix",
]


@dataclass(frozen=True)
class OptimizerSettings:
    """Tolerances and budgets shared by every iterative routine.

    ``tol_abs`` and ``tol_rel`` are convergence tolerances; the ``eps_*``
    fields are acceptance slacks for the predicates named after them.
    """

    tol_abs: float = 1e-8
    tol_rel: float = 1e-8
    restarts: int = 32
    grid_angles: int = 256
    max_iters: int = 2000
    seed: int = 0
    eps_herm: float = 1e-9
    eps_psd: float = 1e-9
    eps_tr: float = 1e-9
    eps_ineq: float = 1e-9
    eps_eq: float = 1e-6
    eps_norm: float = 1e-9
    eps_deg: float = 1e-10
    eps_geo: float = 1e-12

    def __post_init__(self):
        if self.tol_abs <= 0 or self.tol_rel <= 0:
            raise ValueError("tolerances must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.grid_angles < 8:
            raise ValueError("grid_angles must be >= 8")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        for name in ("eps_herm", "eps_psd", "eps_tr", "eps_ineq", "eps_eq", "eps_norm", "eps_deg", "eps_geo"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    def replace(self, **changes) -> OptimizerSettings:
        from dataclasses import replace

        return replace(self, **changes)


DEFAULT_SETTINGS = OptimizerSettings()


def as_matrix(a, name="matrix") -> np.ndarray:
    """Return ``a`` as a square, finite ``complex128`` array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionError(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DimensionError(f"{name} has non-finite entries")
    return m


def _check_same_shape(a, b):
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")


def hermitian_residual(h: np.ndarray) -> float:
    return float(np.linalg.norm(h - h.conj().T, 2))


def _require_hermitian(h, eps):
    res = hermitian_residual(h)
    if res > eps * (1.0 + np.linalg.norm(h, 2)):
        raise NotHermitianError(res)
    return 0.5 * (h + h.conj().T)


def jacobi_eigh(h, tol=1e-15, max_sweeps=60):
    """Cyclic Jacobi eigensolver for a Hermitian matrix.

    Each off-diagonal entry ``h[p, q]`` is annihilated by a complex Givens
    rotation: a diagonal phase makes the 2x2 block real, then a plain Jacobi
    rotation diagonalises it.  Sweeps continue until the off-diagonal
    Frobenius mass drops below ``tol * ||h||_F``.

    Returns
    -------
    (eigenvalues, eigenvectors)
        Eigenvalues ascending, eigenvectors as orthonormal columns.
    """
    a = np.array(h, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a)
    if n == 1 or scale == 0.0:
        w = np.real(np.diag(a)).copy()
        order = np.argsort(w)
        return w[order], v[:, order]
    target = tol * scale
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # columns (p, q) <- (p, q) @ [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                rot = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ rot
                a[p, q] = a[q, p] = 0.0
    else:
        raise ConvergenceError(f"Jacobi sweeps did not converge in {max_sweeps} sweeps")
    w = np.real(np.diag(a))
    order = np.argsort(w)
    return w[order], v[:, order]


def hermitian_eig(h, eps_herm=1e-9, method="lapack"):
    """Eigen-decomposition of a Hermitian matrix.

    Parameters
    ----------
    h : array_like
        Hermitian matrix; rejected with :class:`NotHermitianError` when
        ``||h - h*|| > eps_herm * (1 + ||h||)``.
    method : {"lapack", "jacobi"}
        ``"jacobi"`` uses :func:`jacobi_eigh`; ``"lapack"`` calls
        ``numpy.linalg.eigh``.

    Returns
    -------
    (eigenvalues, eigenvectors)
        Real eigenvalues ascending, orthonormal eigenvector columns.
    """
    h = _require_hermitian(as_matrix(h), eps_herm)
    if method == "jacobi":
        return jacobi_eigh(h)
    if method != "lapack":
        raise ValueError(f"unknown method {method!r}")
    w, v = np.linalg.eigh(h)
    return w, v


def spectral_norm(a) -> float:
    """Largest singular value ``sqrt(lambda_max(A* A))``."""
    a = np.asarray(a, dtype=np.complex128)
    return float(np.linalg.norm(a, 2))


def psd_sqrt(h, clamp=0.0):
    """Square root of a Hermitian PSD matrix, clamping eigenvalues below ``clamp`` to 0."""
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    w = np.where(w < clamp, 0.0, w)
    w = np.maximum(w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def abs_value(a) -> np.ndarray:
    """``|A| = (A* A)^{1/2}``."""
    a = as_matrix(a)
    return psd_sqrt(a.conj().T @ a)


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a)))


def schatten_norm(a, p=2.0) -> float:
    """Schatten ``p``-norm; ``p=inf`` gives the spectral norm."""
    if p < 1:
        raise ValueError("Schatten norms need p >= 1")
    s = np.linalg.svd(as_matrix(a), compute_uv=False)
    if np.isinf(p):
        return float(s[0])
    top = s[0]
    if top == 0.0:
        return 0.0
    # scaled to avoid overflow for large p
    return float(top * np.sum((s / top) ** p) ** (1.0 / p))


def hs_inner(s, t) -> complex:
    """Hilbert-Schmidt inner product ``tr(S T*)``."""
    s = as_matrix(s)
    t = as_matrix(t)
    _check_same_shape(s, t)
    return complex(np.vdot(t, s))


class TraceFunctionals(NamedTuple):
    trace: complex
    schatten: float
    hs_inner: complex


def trace_functionals(a, b, p=2.0) -> TraceFunctionals:
    """Trace and Schatten ``p``-norm of ``a`` together with ``<a, b>_2``."""
    a = as_matrix(a)
    b = as_matrix(b)
    _check_same_shape(a, b)
    return TraceFunctionals(trace(a), schatten_norm(a, p), hs_inner(a, b))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A positive semidefinite matrix with unit trace.

    The constructor validates Hermitian symmetry, positivity and trace
    against ``eps_herm``, ``eps_psd`` and ``eps_tr``.  The stored matrix is
    the Hermitian part of the input.
    """

    matrix: np.ndarray
    eps_herm: float = field(default=1e-9, repr=False)
    eps_psd: float = field(default=1e-9, repr=False)
    eps_tr: float = field(default=1e-9, repr=False)

    def __post_init__(self):
        m = as_matrix(self.matrix, "density operator")
        res = hermitian_residual(m)
        if res > self.eps_herm:
            raise PreconditionError("hermitian residual", res)
        m = 0.5 * (m + m.conj().T)
        lo = float(np.linalg.eigvalsh(m)[0])
        if lo < -self.eps_psd:
            raise PreconditionError("min eigenvalue", lo, "state must be positive semidefinite")
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > self.eps_tr:
            raise PreconditionError("trace", tr, "state must have unit trace")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def sqrt(self) -> np.ndarray:
        """``P^{1/2}`` with eigenvalues below ``eps_psd`` clamped to zero."""
        return psd_sqrt(self.matrix, clamp=self.eps_psd)

    @classmethod
    def from_vector(cls, x) -> DensityOperator:
        """Rank-one state ``x (x) x`` for a vector ``x`` (normalised here)."""
        x = np.asarray(x, dtype=np.complex128).ravel()
        nrm = np.linalg.norm(x)
        if nrm == 0:
            raise PreconditionError("vector norm", 0.0)
        x = x / nrm
        return cls(np.outer(x, x.conj()))

    @classmethod
    def maximally_mixed(cls, n) -> DensityOperator:
        return cls(np.eye(n, dtype=np.complex128) / n)

    def rank(self, tol=1e-10) -> int:
        return int(np.sum(np.linalg.eigvalsh(self.matrix) > tol))


def as_state(p) -> DensityOperator:
    return p if isinstance(p, DensityOperator) else DensityOperator(p)


# ---------------------------------------------------------------- JSON format


def matrix_to_json(a) -> dict:
    """``{"n": n, "entries": [[re, im], ...]}`` with entries row-major."""
    a = as_matrix(a)
    return {"n": a.shape[0], "entries": [[float(z.real), float(z.imag)] for z in a.ravel()]}


def matrix_from_json(obj) -> np.ndarray:
    try:
        n = int(obj["n"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DimensionError(f"malformed matrix JSON: {exc}") from exc
    if n < 1 or len(entries) != n * n:
        raise DimensionError(f"matrix JSON declares n={n} but has {len(entries)} entries")
    try:
        vals = np.array([complex(float(re), float(im)) for re, im in entries])
    except (TypeError, ValueError) as exc:
        raise DimensionError(f"malformed matrix entry: {exc}") from exc
    return as_matrix(vals.reshape(n, n))


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_json(json.load(fh))


def save_matrix(path, a):
    with open(path, "w") as fh:
        json.dump(matrix_to_json(a), fh)

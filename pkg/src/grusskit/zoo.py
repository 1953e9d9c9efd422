"""Seeded matrix generators and named fixtures.

Every random draw goes through a Philox (counter-based) generator keyed by
the spec's seed, so equal specs give bit-identical matrices no matter which
process produces them.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import DimensionError, UnknownFixtureError
from .linalg import DensityOperator

__all__ = ["FAMILIES", "ZooSpec", "generate", "fixtures", "fixture", "rng_for"]

FAMILIES = (
    "ginibre",
    "hermitian",
    "haar_unitary",
    "normal",
    "density_full",
    "density_rank_k",
    "rank_one_state",
    "jordan",
    "hermitian_pd",
    "fixture",
)


@dataclass(frozen=True)
class ZooSpec:
    """Recipe for one matrix.

    ``eigenvalue`` and ``perturbation`` only matter for ``jordan`` (a single
    Jordan block, optionally plus ``perturbation`` times a Ginibre draw);
    ``vector`` fixes the state for ``rank_one_state``.
    """

    family: str
    dim: int = 2
    rank: Optional[int] = None
    seed: int = 0
    fixture_name: Optional[str] = None
    eigenvalue: complex = 0.0
    perturbation: float = 0.0
    vector: Optional[tuple] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.dim < 1:
            raise DimensionError("dim must be >= 1")
        if self.rank is not None and not 1 <= self.rank <= self.dim:
            raise DimensionError(f"rank {self.rank} not in [1, {self.dim}]")

    def to_json(self) -> dict:
        d = asdict(self)
        ev = complex(self.eigenvalue)
        d["eigenvalue"] = [ev.real, ev.imag]
        if self.vector is not None:
            d["vector"] = [[complex(z).real, complex(z).imag] for z in self.vector]
        return d

    @classmethod
    def from_json(cls, obj) -> ZooSpec:
        obj = dict(obj)
        if "eigenvalue" in obj and isinstance(obj["eigenvalue"], (list, tuple)):
            obj["eigenvalue"] = complex(*obj["eigenvalue"])
        if obj.get("vector") is not None:
            obj["vector"] = tuple(complex(*z) if isinstance(z, (list, tuple)) else complex(z) for z in obj["vector"])
        return cls(**obj)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def rng_for(seed) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed) & (2**64 - 1)))


def _gauss(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def _haar(rng, n):
    q, r = np.linalg.qr(_gauss(rng, (n, n)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def _density(g):
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityOperator(rho / np.trace(rho).real)


def generate(spec: ZooSpec):
    """Build the matrix (or :class:`DensityOperator`) described by ``spec``."""
    n = spec.dim
    rng = rng_for(spec.seed)
    fam = spec.family
    if fam == "ginibre":
        return _gauss(rng, (n, n))
    if fam == "hermitian":
        g = _gauss(rng, (n, n))
        return 0.5 * (g + g.conj().T)
    if fam == "haar_unitary":
        return _haar(rng, n)
    if fam == "normal":
        u = _haar(rng, n)
        z = _gauss(rng, n)
        return (u * z) @ u.conj().T
    if fam == "hermitian_pd":
        u = _haar(rng, n)
        lam = 0.05 + rng.exponential(1.0, n)
        h = (u * lam) @ u.conj().T
        return 0.5 * (h + h.conj().T)
    if fam == "density_full":
        return _density(_gauss(rng, (n, n)))
    if fam == "density_rank_k":
        k = spec.rank if spec.rank is not None else max(1, n // 2)
        return _density(_gauss(rng, (n, k)))
    if fam == "rank_one_state":
        if spec.vector is not None:
            x = np.asarray(spec.vector, dtype=np.complex128)
            if x.size != n:
                raise DimensionError(f"vector length {x.size} != dim {n}")
        else:
            x = _gauss(rng, n)
        return DensityOperator.from_vector(x)
    if fam == "jordan":
        j = complex(spec.eigenvalue) * np.eye(n, dtype=np.complex128) + np.eye(n, k=1)
        if spec.perturbation:
            j = j + spec.perturbation * _gauss(rng, (n, n))
        return j
    if fam == "fixture":
        if spec.fixture_name is None:
            raise UnknownFixtureError("fixture family needs fixture_name")
        return fixture(spec.fixture_name)
    raise ValueError(f"unknown family {fam!r}")


def fixtures() -> dict:
    """Named matrices used as exact anchors.

    ``kantorovich_tight`` pairs with ``kantorovich_vector`` (a unit vector,
    not a matrix); ``triangle`` carries the points ``0, 3, 4i`` on its
    diagonal.
    """
    s = 1.0 / np.sqrt(2.0)
    return {
        "diag13": np.diag([1.0, 3.0]).astype(np.complex128),
        "jordan2": np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128),
        "roots4": np.diag([1.0, 1j, -1.0, -1j]).astype(np.complex128),
        "kantorovich_tight": np.diag([1.0, 4.0]).astype(np.complex128),
        "kantorovich_vector": np.array([s, s], dtype=np.complex128),
        "scalar": (2.0 - 1.0j) * np.eye(2, dtype=np.complex128),
        "triangle": np.diag([0.0, 3.0, 4.0j]).astype(np.complex128),
        "flip": np.diag([1.0, -1.0]).astype(np.complex128),
        "mixed2": np.eye(2, dtype=np.complex128) / 2.0,
    }


def fixture(name):
    table = fixtures()
    try:
        return table[name].copy()
    except KeyError:
        raise UnknownFixtureError(f"unknown fixture {name!r}; known: {sorted(table)}") from None

"""Seeded property campaigns over the matrix zoo.

Each suite draws operators and states from :mod:`grusskit.zoo`, checks one
group of invariants and reports the number of failures, the worst slack and
the recipes (:class:`~grusskit.zoo.ZooSpec`) needed to rebuild every
counterexample.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .bounds import normal_chain, profile, refined_chain, renaud_k_chain, sup_estimate
from .distance import dist_sphere, dist_to_scalars
from .geometry import numerical_radius, spectrum
from .linalg import OptimizerSettings, hermitian_eig, hs_inner, schatten_norm, spectral_norm
from .variance import dragomir_bound, v_p, variance, variance_identities
from .zoo import ZooSpec, generate

__all__ = ["TrialConfig", "SuiteResult", "SUITES", "run_suite", "run_verify", "sub_seed", "draw_operator", "draw_state"]

OPERATOR_FAMILIES = ("ginibre", "hermitian", "normal", "haar_unitary", "jordan", "hermitian_pd")
STATE_FAMILIES = ("density_full", "density_rank_k", "rank_one_state")


@dataclass
class TrialConfig:
    dims: list = field(default_factory=lambda: [2, 3, 4, 6])
    trials: int = 2000
    families: list = field(default_factory=lambda: list(OPERATOR_FAMILIES))
    seed: int = 42
    tolerances: dict = field(default_factory=dict)
    output_path: str = "verify_report.json"
    suites: list = field(default_factory=list)
    workers: int = 1
    extra_triples: list = field(default_factory=list)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.dims or any(int(d) < 2 for d in self.dims):
            raise ValueError("dims must all be >= 2")
        unknown = set(self.families) - set(OPERATOR_FAMILIES)
        if unknown:
            raise ValueError(f"unknown operator families: {sorted(unknown)}")
        unknown = set(self.suites) - set(SUITES)
        if unknown:
            raise ValueError(f"unknown suites: {sorted(unknown)}")
        self.dims = [int(d) for d in self.dims]
        for triple in self.extra_triples:
            if set(triple) != {"A", "T", "P"}:
                raise ValueError("each extra triple needs exactly the keys A, T, P")

    def settings(self) -> OptimizerSettings:
        return OptimizerSettings(seed=self.seed, **self.tolerances)


@dataclass
class SuiteResult:
    suite: str
    trials: int
    failures: int = 0
    worst_slack: float = float("inf")
    seeds_of_failures: list = field(default_factory=list)
    seconds: float = 0.0

    def record(self, slack, tol, recipe):
        self.worst_slack = min(self.worst_slack, float(slack))
        if slack < -tol:
            self.failures += 1
            if len(self.seeds_of_failures) < 20:
                self.seeds_of_failures.append(recipe)

    def merge(self, other):
        self.trials += other.trials
        self.failures += other.failures
        self.worst_slack = min(self.worst_slack, other.worst_slack)
        self.seeds_of_failures.extend(other.seeds_of_failures[: 20 - len(self.seeds_of_failures)])

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("seconds")
        if not np.isfinite(d["worst_slack"]):
            d["worst_slack"] = None
        return d


def sub_seed(*keys) -> int:
    """Deterministic 63-bit seed from a tuple of non-negative integers."""
    return int(np.random.SeedSequence([int(k) for k in keys]).generate_state(1, dtype=np.uint64)[0] >> 1)


def draw_operator(family, dim, seed) -> ZooSpec:
    if family == "jordan":
        rng = np.random.default_rng(seed)
        ev = complex(rng.standard_normal(), rng.standard_normal())
        return ZooSpec("jordan", dim, seed=seed, eigenvalue=ev, perturbation=0.1)
    return ZooSpec(family, dim, seed=seed)


def draw_state(index, dim, seed) -> ZooSpec:
    family = STATE_FAMILIES[index % len(STATE_FAMILIES)]
    rank = max(1, dim // 2) if family == "density_rank_k" else None
    return ZooSpec(family, dim, rank=rank, seed=seed)


def _cases(config, suite_id, families=None, with_t=True, with_p=True):
    """Yield ``(recipe, A, T, P)`` for every trial of a suite."""
    families = families or config.families
    for fi, fam in enumerate(families):
        for trial in range(config.trials):
            dim = config.dims[trial % len(config.dims)]
            sa = draw_operator(fam, dim, sub_seed(config.seed, suite_id, fi, trial, 0))
            ft = families[(fi + trial) % len(families)]
            st = draw_operator(ft, dim, sub_seed(config.seed, suite_id, fi, trial, 1)) if with_t else None
            sp = draw_state(trial, dim, sub_seed(config.seed, suite_id, fi, trial, 2)) if with_p else None
            recipe = {"A": sa.to_json()}
            if st is not None:
                recipe["T"] = st.to_json()
            if sp is not None:
                recipe["P"] = sp.to_json()
            yield (
                recipe,
                generate(sa),
                generate(st) if st is not None else None,
                generate(sp) if sp is not None else None,
            )


# ---------------------------------------------------------------------- suites


def suite_linalg(config, settings):
    res = SuiteResult("linalg", 0)
    for recipe, a, _, _ in _cases(config, 1, with_t=False, with_p=False):
        res.trials += 1
        h = 0.5 * (a + a.conj().T)
        w, v = hermitian_eig(h)
        nh = max(spectral_norm(h), 1e-300)
        res.record(1e-9 - spectral_norm((v * w) @ v.conj().T - h) / nh, 0.0, recipe)
        s1, s2, s4 = (schatten_norm(a, p) for p in (1, 2, 4))
        res.record(min(s1 - s2, s2 - s4), 1e-10 * (1 + s1), recipe)
        b = a.conj().T
        res.record(s2 * schatten_norm(b, 2) - abs(hs_inner(a, b)), 1e-10, recipe)
    return res


def suite_radius_chain(config, settings):
    """``r(A) <= w(A) <= ||A|| <= 2 w(A)``."""
    res = SuiteResult("radius_chain", 0)
    for recipe, a, _, _ in _cases(config, 2, with_t=False, with_p=False):
        res.trials += 1
        r = float(np.max(np.abs(spectrum(a))))
        w = numerical_radius(a, settings)
        nrm = spectral_norm(a)
        tol = settings.eps_ineq * (1 + nrm)
        res.record(min(w - r, nrm - w, 2 * w - nrm), tol, recipe)
    return res


def suite_prasanna(config, settings):
    """Direct distance against the sphere supremum."""
    res = SuiteResult("prasanna", 0)
    for recipe, a, _, _ in _cases(config, 3, with_t=False, with_p=False):
        res.trials += 1
        d = dist_to_scalars(a, settings)
        s = dist_sphere(a, settings)
        nrm = spectral_norm(a)
        res.record(-abs(d.d - s.d), 1e-6 * (1 + nrm), recipe)
    return res


def suite_variance(config, settings):
    res = SuiteResult("variance", 0)
    for recipe, a, t, p in _cases(config, 4):
        res.trials += 1
        var = variance(a, p)
        v1, v2, v3 = variance_identities(a, p)
        res.record(-max(abs(v1 - var), abs(v2 - var), abs(v3 - var)), 1e-10 * (1 + spectral_norm(a) ** 2), recipe)
        res.record(var, settings.eps_ineq, recipe)
        lam = complex(*np.random.default_rng(res.trials).standard_normal(2))
        eye = np.eye(a.shape[0])
        scale = 1 + spectral_norm(a) * spectral_norm(t)
        diff = abs(v_p(a - lam * eye, t - 2 * lam * eye, p) - v_p(a, t, p))
        res.record(-diff, 1e-10 * scale * (1 + abs(lam)) ** 2, recipe)
    return res


def suite_dragomir(config, settings):
    res = SuiteResult("dragomir", 0)
    for recipe, a, t, p in _cases(config, 5):
        res.trials += 1
        rng = np.random.default_rng(res.trials)
        lam, mu = (complex(*rng.standard_normal(2)) for _ in range(2))
        lhs = abs(v_p(a, t, p))
        mid, out = dragomir_bound(a, t, p, lam, mu)
        tol = settings.eps_ineq * (1 + spectral_norm(a) * spectral_norm(t))
        res.record(min(mid - lhs, out - mid), tol, recipe)
    return res


def suite_chains(config, settings):
    """Refined chain and the parametric chain at a random ``(lam, mu)``."""
    res = SuiteResult("chains", 0)
    for recipe, a, t, p in _cases(config, 6):
        res.trials += 1
        pa, pt = profile(a, settings), profile(t, settings)
        sup = sup_estimate(a, t, p, settings).value
        rep = refined_chain(a, t, p, settings, (pa, pt), sup)
        res.record(rep.worst_slack, rep.tol_ineq, recipe)
        if not (pa.dist.degenerate or pt.dist.degenerate):
            rng = np.random.default_rng(res.trials)
            lam, mu = rng.uniform(0, 1, 2)
            rep = renaud_k_chain(a, t, p, lam, mu, settings, (pa, pt), sup)
            res.record(rep.worst_slack, rep.tol_ineq, recipe)
            k = rep.meta["k"]
            res.record(min(k - 1.0, 4.0 - k), 1e-9, recipe)
    return res


def suite_normal(config, settings):
    res = SuiteResult("normal_chain", 0)
    for recipe, a, t, p in _cases(config, 7, families=["normal"]):
        res.trials += 1
        rep = normal_chain(a, t, p, settings)
        tol = rep.tol_ineq
        res.record(min(rep.slacks[:2]), tol, recipe)
        res.record(rep.slacks[2], settings.eps_eq, recipe)
    return res


SUITES = {
    "linalg": suite_linalg,
    "radius_chain": suite_radius_chain,
    "prasanna": suite_prasanna,
    "variance": suite_variance,
    "dragomir": suite_dragomir,
    "chains": suite_chains,
    "normal_chain": suite_normal,
}


def run_suite(name, config) -> SuiteResult:
    t0 = time.perf_counter()
    res = SUITES[name](config, config.settings())
    res.seconds = time.perf_counter() - t0
    return res


def _run_named(args):
    name, config = args
    return run_suite(name, config)


def run_extra_triples(config: TrialConfig):
    """Refined chain on the explicitly listed ``{"A", "T", "P"}`` recipes."""
    settings = config.settings()
    res = SuiteResult("extra_triples", 0)
    reports = []
    for recipe in config.extra_triples:
        a, t, p = (generate(ZooSpec.from_json(recipe[k])) for k in ("A", "T", "P"))
        rep = refined_chain(a, t, p, settings)
        res.trials += 1
        res.record(rep.worst_slack, rep.tol_ineq, recipe)
        reports.append(rep.to_json())
    return res, reports


def run_verify(config: TrialConfig) -> dict:
    """Run the configured suites (all by default) and return the JSON summary.

    Suites are independent, so with ``workers > 1`` they run in a process
    pool; every trial draws from its own sub-seed and the summary is the same
    for any worker count.
    """
    names = config.suites or list(SUITES)
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            results = list(pool.map(_run_named, [(n, config) for n in names]))
    else:
        results = [run_suite(n, config) for n in names]
    extra_reports = []
    if config.extra_triples:
        extra, extra_reports = run_extra_triples(config)
        results.append(extra)
    failures = sum(r.failures for r in results)
    out = {
        "config": {k: v for k, v in asdict(config).items() if k != "workers"},
        "suites": [r.to_json() for r in results],
        "failures": failures,
        "passed": failures == 0,
    }
    if extra_reports:
        out["extra_reports"] = extra_reports
    return out

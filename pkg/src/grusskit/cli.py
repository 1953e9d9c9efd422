"""Command-line entry point.

Exit codes: 0 when every checked relation holds, 1 on a mathematical
violation (including a failed precondition such as normality), 2 on usage,
parse or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import os
import sys

import numpy as np

from . import bounds
from .campaign import SUITES, TrialConfig, run_verify
from .distance import dist_characterizations, dist_sphere, dist_to_scalars
from .errors import GrussError, PreconditionError
from .linalg import DEFAULT_SETTINGS, DensityOperator, load_matrix, matrix_to_json, spectral_norm
from .zoo import FAMILIES, ZooSpec, generate

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
CHAINS = ("renaud", "refined", "normal", "transloid", "theorem", "normaloid")
DEFAULT_SHIFTS = (0.0, 1.0, -1.0, 1j, -1j)


class UsageError(Exception):
    pass


def default_seed(fallback=42) -> int:
    env = os.environ.get("GRUSS_SEED")
    if env is None:
        return fallback
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"GRUSS_SEED must be an integer, got {env!r}") from None


def _parse_tol(items):
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects KEY=VALUE, got {item!r}")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise UsageError(f"--tol value for {key!r} is not a number") from None
    return out


def _settings(args):
    try:
        return DEFAULT_SETTINGS.replace(seed=args.seed, **_parse_tol(args.tol))
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _load(path, what):
    try:
        return load_matrix(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read {what} from {path}: {exc}") from None


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


def _dims(text):
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension list {text!r}") from None


# ----------------------------------------------------------------- commands


def cmd_verify(args) -> int:
    cfg = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
    overrides = {
        "seed": args.seed if args.seed_given or "seed" not in cfg else None,
        "trials": args.trials,
        "dims": args.dims,
        "families": args.family,
        "output_path": args.out,
        "suites": args.suite,
    }
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    tol = _parse_tol(args.tol)
    if tol:
        cfg["tolerances"] = {**cfg.get("tolerances", {}), **tol}
    cfg["workers"] = args.workers
    try:
        config = TrialConfig(**cfg)
        config.settings()
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid config: {exc}") from None
    report = run_verify(config)
    report["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
    _write_text(config.output_path, json.dumps(report, indent=2) + "\n")
    for s in report["suites"]:
        worst = "n/a" if s["worst_slack"] is None else f"{s['worst_slack']:+.3e}"
        print(f"{s['suite']:<14} trials {s['trials']:>6}  failures {s['failures']:>4}  worst slack {worst}")
    print(f"report written to {config.output_path}")
    return EXIT_OK if report["passed"] else EXIT_VIOLATION


def build_chain(kind, a, t, p, lam, mu, settings, shifts=DEFAULT_SHIFTS):
    if kind == "renaud":
        return bounds.renaud_chain(a, t, p, settings)
    if kind == "refined":
        return bounds.refined_chain(a, t, p, settings)
    if kind == "normal":
        return bounds.normal_chain(a, t, p, settings)
    if kind == "transloid":
        return bounds.transloid_chain(a, t, p, shifts, settings)
    if kind == "theorem":
        return bounds.renaud_k_chain(a, t, p, lam, mu, settings)
    if kind == "normaloid":
        return bounds.normaloid_corollary_chain(a, t, p, lam, mu, settings)
    raise UsageError(f"unknown chain {kind!r}")


def cmd_chain(args) -> int:
    settings = _settings(args)
    a, t = _load(args.A, "A"), _load(args.T, "T")
    try:
        p = DensityOperator(_load(args.P, "P"))
    except PreconditionError as exc:
        raise UsageError(f"P is not a density operator: {exc}") from None
    rep = build_chain(args.chain, a, t, p, args.lam, args.mu, settings)
    print(f"chain: {args.chain}")
    print(rep.table())
    if args.out:
        _write_text(args.out, json.dumps(rep.to_json(), indent=2) + "\n")
    return EXIT_OK if rep.all_hold else EXIT_VIOLATION


SWEEP_COLUMNS = ("lambda", "mu", "h_lambda", "h_mu", "k", "bound", "lhs", "slack")


def sweep_rows(a, t, grid, settings=DEFAULT_SETTINGS):
    """Rows of :data:`SWEEP_COLUMNS` over the uniform ``grid x grid`` square.

    ``bound`` is ``k w(A - lambda_0) w(T - mu_0)`` and ``lhs`` is
    ``dist(A) dist(T)``, the supremum of ``|V_P(A, T)|`` over states.
    """
    if grid < 2:
        raise PreconditionError("grid size", float(grid), "grid must be >= 2")
    pa, pt = bounds.profile(a, settings), bounds.profile(t, settings)
    lhs = pa.dist.d * pt.dist.d
    rows = []
    for lam, mu, ha, ht in bounds.k_sweep(pa, pt, grid, settings):
        k = ha * ht
        bound = k * pa.w_shift * pt.w_shift
        rows.append((lam, mu, ha, ht, k, bound, lhs, bound - lhs))
    return rows


def cmd_sweep(args) -> int:
    settings = _settings(args)
    a, t = _load(args.A, "A"), _load(args.T, "T")
    rows = sweep_rows(a, t, args.grid, settings)
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(SWEEP_COLUMNS)
        writer.writerows([[repr(float(v)) for v in row] for row in rows])
    finally:
        if out is not sys.stdout:
            out.close()
    kmin = min(rows, key=lambda r: r[4])
    print(f"k min {kmin[4]:.12g} at (lambda, mu) = ({kmin[0]:g}, {kmin[1]:g})", file=sys.stderr)
    tol = settings.eps_ineq * (1.0 + spectral_norm(a) * spectral_norm(t))
    return EXIT_OK if all(r[-1] >= -tol for r in rows) else EXIT_VIOLATION


def distance_report(a, settings=DEFAULT_SETTINGS, agree_tol=1e-5):
    direct = dist_to_scalars(a, settings)
    sphere = dist_sphere(a, settings)
    chars = dist_characterizations(a, settings)
    scale = agree_tol * (1.0 + spectral_norm(a))
    return {
        "c": [direct.c.real, direct.c.imag],
        "d": direct.d,
        "sphere_d": sphere.d,
        "commutator_half_sup": chars.commutator_half_sup,
        "rank_one_proj_sup": chars.rank_one_proj_sup,
        "agree": {
            "sphere": bool(abs(sphere.d - direct.d) <= scale),
            "commutator": bool(abs(chars.commutator_half_sup - direct.d) <= scale),
            "rank_one_projection": bool(abs(chars.rank_one_proj_sup - direct.d) <= scale),
        },
        "converged": bool(direct.converged and sphere.converged),
        "degenerate": bool(direct.degenerate),
    }


def cmd_distance(args) -> int:
    settings = _settings(args)
    a = _load(args.A, "matrix")
    rep = distance_report(a, settings)
    text = json.dumps(rep, indent=2)
    print(text)
    if args.out:
        _write_text(args.out, text + "\n")
    return EXIT_OK if all(rep["agree"].values()) else EXIT_VIOLATION


def cmd_zoo(args) -> int:
    if args.spec:
        try:
            spec = ZooSpec.from_json(json.loads(args.spec))
        except (json.JSONDecodeError, TypeError, ValueError) as exc:
            raise UsageError(f"bad --spec: {exc}") from None
    else:
        dims = args.dims or [2]
        if len(dims) != 1:
            raise UsageError("zoo takes a single dimension")
        ev = complex(args.eigenvalue.replace("i", "j")) if args.eigenvalue else 0.0
        try:
            spec = ZooSpec(
                args.family[0] if args.family else "ginibre",
                dims[0],
                rank=args.rank,
                seed=args.seed,
                fixture_name=args.fixture,
                eigenvalue=ev,
                perturbation=args.perturbation,
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    m = generate(spec)
    if isinstance(m, DensityOperator):
        m = m.matrix
    obj = matrix_to_json(np.asarray(m))
    text = json.dumps(obj)
    if args.out:
        _write_text(args.out, text + "\n")
    else:
        print(text)
    return EXIT_OK


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="seed (default: $GRUSS_SEED or 42)")
    common.add_argument("--tol", action="append", metavar="KEY=VALUE", help="override a tolerance, e.g. eps_ineq=1e-9")
    common.add_argument("--out", default=None, help="output file")

    parser = argparse.ArgumentParser(prog="grusskit", description="Check Grüss-type operator inequalities numerically.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run the seeded property suites")
    v.add_argument("--config", help="JSON file with TrialConfig fields")
    v.add_argument("--trials", type=int, default=None, help="trials per family")
    v.add_argument("--dims", type=_dims, default=None, help="comma separated, e.g. 2,3,4,6")
    v.add_argument("--family", action="append", default=None, help="operator family (repeatable)")
    v.add_argument("--suite", action="append", default=None, choices=sorted(SUITES), help="restrict to a suite (repeatable)")
    v.add_argument("--workers", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("chain", parents=[common], help="evaluate one bound chain")
    c.add_argument("A")
    c.add_argument("T")
    c.add_argument("P")
    c.add_argument("--chain", choices=CHAINS, default="refined")
    c.add_argument("--lambda", dest="lam", type=float, default=1.0)
    c.add_argument("--mu", type=float, default=1.0)
    c.set_defaults(func=cmd_chain)

    s = sub.add_parser("sweep", parents=[common], help="tabulate k(A, T) over a (lambda, mu) grid as CSV")
    s.add_argument("A")
    s.add_argument("T")
    s.add_argument("--grid", type=int, default=11)
    s.set_defaults(func=cmd_sweep)

    d = sub.add_parser("distance", parents=[common], help="distance of a matrix to the scalars")
    d.add_argument("A")
    d.set_defaults(func=cmd_distance)

    z = sub.add_parser("zoo", parents=[common], help="emit a generated matrix as JSON")
    z.add_argument("--family", action="append", choices=FAMILIES, default=None)
    z.add_argument("--dims", "--dim", dest="dims", type=_dims, default=None)
    z.add_argument("--rank", type=int, default=None)
    z.add_argument("--fixture", default=None)
    z.add_argument("--eigenvalue", default=None, help="Jordan eigenvalue, e.g. 1+2i")
    z.add_argument("--perturbation", type=float, default=0.0)
    z.add_argument("--spec", default=None, help="full ZooSpec as JSON")
    z.set_defaults(func=cmd_zoo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        args.seed_given = args.seed is not None
        if args.seed is None:
            args.seed = default_seed()
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (GrussError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

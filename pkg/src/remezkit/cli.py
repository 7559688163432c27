"""Command-line interface."""
from __future__ import annotations

import argparse
import csv
import hashlib
import io as _io
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from ._accel import backend_name
from .io import dumps, load_config, load_curve, load_pointset, load_polynomial, parse_complex

EXIT_OK, EXIT_INPUT, EXIT_COMPUTE = 0, 2, 3


class InputError(ValueError):
    pass


def default_seed() -> int:
    raw = os.environ.get("REMEZKIT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"REMEZKIT_SEED must be an integer, got {raw!r}")


def _floats(text: str) -> list:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"expected a comma-separated list of numbers, got {text!r}")


# --------------------------------------------------------------------------
# output plumbing
# --------------------------------------------------------------------------

class Run:
    def __init__(self, args, argv):
        self.args = args
        self.argv = list(argv)
        self.inputs = []
        self.outputs = []

    def input(self, path):
        self.inputs.append(str(path))
        return path

    def write_text(self, path, text: str):
        Path(path).write_text(text)
        self.outputs.append(str(path))

    def emit(self, result) -> None:
        text = dumps(result)
        out = self.args.output
        if out in (None, "-"):
            sys.stdout.write(text)
        else:
            self.write_text(out, text)
        self._manifest(out)

    def _manifest(self, out):
        digests = {}
        for p in self.inputs:
            try:
                digests[p] = hashlib.sha256(Path(p).read_bytes()).hexdigest()
            except OSError:
                digests[p] = None
        man = {
            "command": self.args.command,
            "argv": self.argv,
            "inputs": digests,
            "seed": self.args.seed,
            "tool_version": __version__,
            "backend": backend_name(),
            "threads": 1,
            "thread_count_independent": True,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "outputs": list(self.outputs),
        }
        if self.args.no_manifest:
            return
        if out in (None, "-"):
            sys.stderr.write(dumps({"manifest": man}))
        else:
            Path(str(out) + ".manifest.json").write_text(dumps(man))


def _csv_text(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_invariants(run: Run):
    from .covering import invariant_report

    a = run.args
    Z = load_pointset(run.input(a.points))
    rep = invariant_report(Z, a.d, a.mode, mu2=a.mu2, seed=a.seed)
    return rep.to_dict()


def cmd_remez_verify(run: Run):
    from .remez import summarize, verify_leading_coeff, verify_polynomial_remez

    a = run.args
    if a.trials < 0:
        raise InputError("--trials must be nonnegative")
    Z = load_pointset(run.input(a.points))
    certs = verify_polynomial_remez(Z, a.d, a.trials, a.seed)
    out = {"certificates": [c.to_dict() for c in certs], "summary": summarize(certs)}
    if a.leading:
        recs = verify_leading_coeff(Z, a.d, a.trials, a.seed)
        out["leading_coefficient"] = {"records": [r.to_dict() for r in recs], "summary": summarize(recs)}
    return out


def cmd_cartan(run: Run):
    from .remez import verify_cartan

    a = run.args
    P = load_polynomial(run.input(a.poly))
    eps = _floats(a.eps)
    if not eps:
        raise InputError("--eps needs at least one value")
    reports = [verify_cartan(P, e, a.samples, a.seed) for e in eps]
    if a.csv:
        rows = [(r.eps, r.cd_of_sample, r.cartan_bound) for r in reports]
        run.write_text(a.csv, _csv_text(["eps", "c_d_sample", "bound_2e_eps"], rows))
    return {"reports": [r.to_dict() for r in reports],
            "all_hold": all(r.holds for r in reports)}


def _parse_function(spec: str, run: Run):
    from .valence import polynomial_map, power_sum_example

    if spec.startswith("power-sum") or spec.startswith("power_sum"):
        params = {"p": 2, "N": 21}
        _, _, rest = spec.partition(":")
        for item in filter(None, rest.split(",")):
            k, sep, v = item.partition("=")
            if not sep or k.strip() not in params:
                raise InputError(f"bad power-sum parameter {item!r} (use p=..,N=..)")
            try:
                params[k.strip()] = int(v)
            except ValueError:
                raise InputError(f"power-sum parameter {k} must be an integer")
        return power_sum_example(params["p"], params["N"])
    if spec.startswith("poly:"):
        path = spec[5:]
        return polynomial_map(load_polynomial(run.input(path)))
    raise InputError(f"unknown function spec {spec!r} (use power-sum:p=2,N=21 or poly:<file>)")


def _parse_witness(text: str, run: Run):
    from .polytools import ComplexPolynomial

    if os.path.exists(text):
        return load_polynomial(run.input(text))
    try:
        return ComplexPolynomial([parse_complex(t) for t in text.split(",")])
    except ValueError:
        raise InputError(f"witness must be a polynomial file or ascending coefficients, got {text!r}")


def cmd_valence(run: Run):
    from .covering import Disk
    from .valence import probe_valence

    a = run.args
    f = _parse_function(a.function, run)
    if a.s < 0 or a.trials < 0:
        raise InputError("--s and --trials must be nonnegative")
    disk = f.domain if a.radius is None else Disk(f.domain.center, a.radius)
    witnesses = [_parse_witness(w, run) for w in a.witness]
    rep = probe_valence(f, disk, a.s, a.trials, a.seed, witnesses)
    out = rep.to_dict()
    out["function"] = f.description
    return out


def _basepoint(a, sigma):
    if a.basepoint is not None:
        return parse_complex(a.basepoint)
    # a point well clear of the singular locus
    far = float(np.max(np.abs(sigma.points))) if len(sigma) else 0.0
    return complex(far + 1.0, 0.5)


def cmd_curve(run: Run):
    from .curves import discriminant_x, fiber, monodromy, singular_points

    a = run.args
    Q = load_curve(run.input(a.curve))
    sigma = singular_points(Q)
    d = Q.deg_y
    if a.action == "analyze":
        return {"deg_y": d, "deg_x": Q.deg_x, "total_degree": Q.total_degree,
                "discriminant_degree": discriminant_x(Q).degree,
                "singular_locus": sigma.to_dict(), "n_singular": len(sigma),
                "r_bound": 2 * d * d, "within_bound": len(sigma) <= 2 * d * d}
    x0 = _basepoint(a, sigma)
    if a.action == "fiber":
        F = fiber(Q, x0)
        return {"basepoint": x0, "fiber": F, "residuals": np.abs(Q(np.full(F.size, x0), F)),
                "distance_to_singular": sigma.distance(x0)}
    act = monodromy(Q, x0)
    out = act.to_dict()
    out["cycle_types"] = [_cycle_type(p) for _, p in act.generators]
    return out


def _cycle_type(perm) -> list:
    seen, lens = set(), []
    for i in range(len(perm)):
        if i in seen:
            continue
        n, j = 0, i
        while j not in seen:
            seen.add(j)
            j = perm[j]
            n += 1
        lens.append(n)
    return sorted(lens, reverse=True)


def cmd_chain(run: Run):
    from .chains import search_chain, verify_global_remez
    from .curves import random_bivariate
    from .remez import trial_rng

    a = run.args
    cfg = load_config(run.input(a.config))
    chain, K = search_chain(cfg, a.seed, a.optimize)
    out = {"chain": chain.to_dict(), "K": K.to_dict()}
    if a.action == "estimate":
        return out
    if a.poly:
        from .io import read_json
        from .curves import BivariatePolynomial

        polys = [BivariatePolynomial.from_dict(read_json(run.input(a.poly)))]
    else:
        polys = [random_bivariate(trial_rng(a.seed, t), cfg.poly_degree_d1) for t in range(a.trials)]
    certs = []
    for k, P in enumerate(polys):
        certs.append(verify_global_remez(cfg, P, chain, seed=a.seed, check_links=(k == 0 or a.check_links)))
    out["certificates"] = [c.to_dict() for c in certs]
    out["summary"] = {"count": len(certs), "violations": sum(not c.holds for c in certs),
                      "min_slack": min((c.slack for c in certs), default=None)}
    return out


def _d_values(a) -> list:
    if a.d_list:
        return [int(v) for v in _floats(a.d_list)]
    lo, sep, hi = a.d_range.partition("..")
    try:
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise InputError(f"--d-range must look like 8..128, got {a.d_range!r}")
    if not sep or lo > hi:
        raise InputError(f"bad --d-range {a.d_range!r}")
    ds, d = [], lo
    while d <= hi:
        ds.append(d)
        d *= 2
    return ds


def cmd_asymptotics(run: Run):
    from .asymptotics import zr_study

    a = run.args
    rs = _floats(a.r)
    res = zr_study(rs, _d_values(a))
    if a.csv:
        run.write_text(a.csv, _csv_text(["r", "d", "omega_d", "omega_cd"], res.rows))
    return res.to_dict()


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="remezkit", description="Covering invariants and Remez-type certificates.")
    p.add_argument("--version", action="version", version=f"remezkit {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", default=None, help="JSON output path (default stdout)")
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default $REMEZKIT_SEED or 0)")
    common.add_argument("--no-manifest", action="store_true", help="skip the run manifest")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("invariants", parents=[common], help="c_d, rho_d, omega_cd, omega_d of a point set")
    s.add_argument("points")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--mode", choices=["auto", "exact", "heuristic"], default="auto")
    s.add_argument("--mu2", type=float, default=None, help="area for the measure lower bound")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("remez-verify", parents=[common], help="random-polynomial Remez certificates")
    s.add_argument("points")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--leading", action="store_true", help="also check the leading-coefficient bound")
    s.set_defaults(func=cmd_remez_verify)

    s = sub.add_parser("cartan", parents=[common], help="sublevel-set covering check")
    s.add_argument("poly")
    s.add_argument("--eps", default="0.1", help="comma-separated eps values")
    s.add_argument("--samples", type=int, default=2000)
    s.add_argument("--csv", default=None, help="write (eps, c_d_sample, 2e*eps) rows here")
    s.set_defaults(func=cmd_cartan)

    s = sub.add_parser("valence", parents=[common], help="probe solution counts of f = P")
    s.add_argument("function", help="power-sum:p=2,N=21 or poly:<file>")
    s.add_argument("--s", type=int, default=1)
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--radius", type=float, default=None, help="override the domain radius")
    s.add_argument("--witness", action="append", default=[],
                   help="extra polynomial: JSON file or ascending coefficients like 1e-12,0,1")
    s.set_defaults(func=cmd_valence)

    s = sub.add_parser("curve", parents=[common], help="singular locus, fibers, monodromy")
    s.add_argument("curve")
    s.add_argument("action", choices=["analyze", "monodromy", "fiber"])
    s.add_argument("--basepoint", default=None, help="complex basepoint, e.g. 1+0.5j or 2")
    s.set_defaults(func=cmd_curve)

    s = sub.add_parser("chain", parents=[common], help="chain constant and global certificates")
    s.add_argument("config")
    s.add_argument("action", choices=["estimate", "verify"])
    s.add_argument("--optimize", action="store_true", help="coordinate descent over inner radii")
    s.add_argument("--trials", type=int, default=20, help="random P for verify")
    s.add_argument("--poly", default=None, help="bivariate JSON to verify instead of random P")
    s.add_argument("--check-links", action="store_true", help="per-link checks for every P")
    s.set_defaults(func=cmd_chain)

    s = sub.add_parser("asymptotics", parents=[common], help="omega_d and omega_cd of Z_r = {k^-r}")
    s.add_argument("--r", default="1,2", help="comma-separated integers")
    s.add_argument("--d-range", default="8..128", help="a..b, doubling from a")
    s.add_argument("--d-list", default=None, help="explicit comma-separated d values")
    s.add_argument("--csv", default=None, help="write (r, d, omega_d, omega_cd) rows here")
    s.set_defaults(func=cmd_asymptotics)
    return p


def main(argv=None) -> int:
    from .chains import NoChainFound
    from .curves import DiscriminantError, TrackingError
    from .polytools import RootFindingError
    from .valence import IntegrationError

    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.seed is None:
            args.seed = default_seed()
        run = Run(args, argv)
        result = args.func(run)
        run.emit(result)
        return EXIT_OK
    except (NoChainFound, TrackingError, DiscriminantError, RootFindingError, IntegrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # computational failure of an unexpected kind
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())

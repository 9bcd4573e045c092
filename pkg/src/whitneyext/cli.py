"""Command-line umbrella: decompose, render, pou-check, extend, paths,
seminorm, bound, split, verify.

Every subcommand exits 0 exactly when the requested checks pass (or the
requested artifact was produced without error).
"""

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction

from . import harness, io
from .extension import ExtensionField
from .functions import by_name
from .geometry import DyadicCube
from .params import SpaceParams
from .partition import theta_all
from .paths import build_path, sample_A_P, fit_decay
from .rng import block_generator, derive_seed
from .seminorm import Region, gagliardo


def _out_path(args, default_name):
    out = getattr(args, "out", None)
    if out is None:
        return default_name
    if os.path.isdir(out):
        return os.path.join(out, default_name)
    return out


def cmd_decompose(args):
    from .decomposition import build

    data = io.load_json(args.sites)
    points = data["points"] if isinstance(data, dict) else data
    sites = [tuple(Fraction(str(c)) for c in pt) for pt in points]
    n = len(sites[0])
    params = SpaceParams(n=n, s=args.s, p=args.p,
                         require_embedding=not args.no_embedding)
    W = build(params, sites, args.domain_exp, args.max_depth)
    io.save_decomposition(W, _out_path(args, "cubes.json"))
    print(f"{W.cube_count} cubes, {len(W.fringe)} fringe cubes")
    return 0


def cmd_render(args):
    W = io.load_decomposition(args.cubes)
    io.render_decomposition_svg(W, _out_path(args, "decomp.svg"))
    return 0


def cmd_pou_check(args):
    W = io.load_decomposition(args.cubes)
    g = block_generator(derive_seed(args.seed, "pou-cli"), 0)
    half = float(2 ** W.domain_exp)
    worst = 0.0
    tested = 0
    while tested < args.samples:
        x = tuple(g.uniform(-half, half) for _ in range(W.n))
        try:
            thetas = theta_all(W, x, 0)
        except Exception:
            continue
        worst = max(worst, abs(sum(tv.value for tv in thetas.values()) - 1.0))
        tested += 1
    passed = worst <= 1e-12
    io.dump_json({"passed": passed, "worst_deviation": worst,
                  "samples": tested, "order": args.order},
                 _out_path(args, "report.json"))
    print(f"sum-to-one worst deviation {worst:.3e} over {tested} points")
    return 0 if passed else 1


def cmd_extend(args):
    W = io.load_decomposition(args.cubes)
    jets = io.load_jetfield(args.jets)
    Tf = ExtensionField(W, jets)
    deriv = tuple(int(c) for c in args.deriv.split(","))
    rows = []
    with open(args.queries) as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#"):
                continue
            pt = tuple(float(c) for c in row)
            try:
                rows.append(list(pt) + [Tf.eval(pt, deriv)])
            except Exception as exc:
                rows.append(list(pt) + [float("nan")])
                print(f"point {pt}: {exc}", file=sys.stderr)
    with open(_out_path(args, "values.csv"), "w", newline="") as fh:
        csv.writer(fh).writerows(rows)
    return 0


def cmd_paths(args):
    W = io.load_decomposition(args.cubes)
    P = DyadicCube.from_key(args.cube_id)
    paths = []
    for i in range(args.samples):
        x = sample_A_P(W, P, derive_seed(args.seed, "cli-path", i))
        if not W.in_domain(x) or x == W.anchor(P):
            continue
        paths.append(build_path(W, P, x))
    decay = fit_decay(paths) if paths else None
    ok = bool(paths) and all(
        p.adjacency_check() and p.monotone_check() for p in paths)
    io.dump_json({"cube": args.cube_id,
                  "paths": [p.to_json() for p in paths],
                  "decay": decay.to_json() if decay else None,
                  "passed": ok},
                 _out_path(args, "paths.json"))
    if args.render_out:
        io.render_paths_svg(W, paths, args.render_out)
    return 0 if ok else 1


def cmd_seminorm(args):
    params = SpaceParams(n=args.n, s=args.s, p=args.p,
                         require_embedding=not args.no_embedding)
    kind, _, rest = args.field.partition(":")
    if kind == "analytic":
        field = by_name(rest, args.n)
    elif kind == "extension":
        cubes_path, _, jets_path = rest.partition("+")
        W = io.load_decomposition(cubes_path)
        field = ExtensionField(W, io.load_jetfield(jets_path))
    else:
        raise SystemExit(f"unknown field spec {args.field!r}")
    box = io.load_json(args.region)
    region = Region.from_box(box["lo"], box["hi"])
    est = gagliardo(field, region, params, method=args.method,
                    budget=args.budget, seed=args.seed)
    io.dump_json(est.to_json(), _out_path(args, "est.json"))
    print(f"value {est.value:.6g} +- {est.error_bound:.2g} ({est.method})")
    return 0


def _load_scenario(args):
    return harness.Scenario.from_json(io.load_json(args.config))


def cmd_bound(args):
    report = harness.run_bound_experiment(_load_scenario(args))
    io.dump_json(report, _out_path(args, "report.json"))
    rho = report["rho"]
    print(f"rho = {rho}" + (f"  ({report['note']})" if report["note"] else ""))
    return 0 if (rho is None or math.isfinite(rho)) else 1


def cmd_split(args):
    report = harness.run_term_split(_load_scenario(args))
    io.dump_json(report, _out_path(args, "report.json"))
    for key in ("I", "II", "III", "IV"):
        t = report["terms"][key]
        print(f"{key}: {t['value']:.6g} +- {t['error']:.2g}")
    ok = report["sum_consistent"] and report["term_I_bounded"]
    return 0 if ok else 1


def cmd_verify(args):
    report = harness.verify_all(_load_scenario(args))
    io.dump_json(report, _out_path(args, "report.json"))
    print(harness.summarize(report))
    return 0 if report["passed"] else 1


def make_parser():
    top = argparse.ArgumentParser(
        prog="whitney",
        description="Whitney jet extension: decomposition, partition of "
                    "unity, extension operator, cube chains, seminorm "
                    "estimation and verification suites.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="build a Whitney decomposition")
    p.add_argument("--sites", required=True)
    p.add_argument("--domain-exp", type=int, required=True)
    p.add_argument("--max-depth", type=int, required=True)
    p.add_argument("--s", type=float, default=1.5)
    p.add_argument("--p", type=float, default=4.0)
    p.add_argument("--no-embedding", action="store_true",
                   help="allow parameters with n/p >= {s}")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("render", help="SVG of a planar decomposition")
    p.add_argument("--cubes", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("pou-check", help="partition-of-unity spot check")
    p.add_argument("--cubes", required=True)
    p.add_argument("--order", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_pou_check)

    p = sub.add_parser("extend", help="evaluate the extension on queries")
    p.add_argument("--cubes", required=True)
    p.add_argument("--jets", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--deriv", default="0")
    p.add_argument("--out")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("paths", help="cube chains from a cube's A_P samples")
    p.add_argument("--cubes", required=True)
    p.add_argument("--cube-id", required=True)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--render-out")
    p.add_argument("--out")
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("seminorm", help="Gagliardo seminorm estimate")
    p.add_argument("--field", required=True,
                   help="analytic:NAME or extension:cubes.json+jets.json")
    p.add_argument("--region", required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--method", default="plain-mc",
                   choices=["plain-mc", "importance-mc", "tensor-quad"])
    p.add_argument("--budget", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-embedding", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_seminorm)

    for name, func, help_text in (
            ("bound", cmd_bound, "end-to-end seminorm ratio experiment"),
            ("split", cmd_split, "four-term split of the extension seminorm"),
            ("verify", cmd_verify, "run every verification battery")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True)
        p.add_argument("--out")
        p.set_defaults(func=func)
    return top


def main(argv=None):
    args = make_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

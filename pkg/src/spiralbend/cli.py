"""Command line entry point: ``spiralbend <command> [options]``.

Every command prints a JSON certificate (``"schema": "spiralbend/1"``,
sorted keys) and exits with 0 (pass), 1 (certified failure), 2 (usage or
input error) or 3 (internal consistency failure).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import svg
from .errors import ConsistencyError, NotInvariant, SpiralbendError
from .harness import SCHEMA, default_threads, jsonable

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_CONSISTENCY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _family(text: str) -> str:
    from .norms2d import parse_family

    try:
        parse_family(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return text


def _family_list(text: str) -> str:
    parts = [t.strip() for t in text.split(",") if t.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("empty family list")
    for t in parts:
        _family(t)
    return text


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="seed for every stochastic step (default 0)")
    p.add_argument("--out", help="also write the JSON certificate to this path")
    p.add_argument("--json-only", action="store_true", help="do not write any SVG")
    p.add_argument("--svg", help="SVG output path (default <command>.svg)")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default $SPIRALBEND_THREADS or 1)")
    p.add_argument("--config", help="JSON file whose keys are option names; explicit flags win")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="spiralbend", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("norms", parents=[common], help="constants and validation of a 2D unconditional norm")
    p.add_argument("--family", type=_family, default="l2", help="l1, l2, linf or lp such as l1.5")
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--lip-grid", type=int, default=4096)
    p.add_argument("--samples", type=int, default=10_000)

    p = sub.add_parser("embed", parents=[common], help="annulus-glued embedding of a point cloud")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--cloud", help='JSON file with "dim" and "points"')
    src.add_argument("--random", type=int, help="generate a seeded cloud with this many points")
    p.add_argument("--dim", type=int, default=3, help="dimension of a generated cloud")
    p.add_argument("--periods", type=float, default=2.5, help="schedule periods spanned by a generated cloud")
    p.add_argument("--eps", type=float, default=0.5, help="target distortion parameter")
    p.add_argument("--psi", type=float, help="override the chosen psi")
    p.add_argument("--d", type=float, help="override the chosen d")
    p.add_argument("--Z", type=_family_list, default="l2", help="comma-separated combiner families cycled over pairs")
    p.add_argument("--mode", default="auto", choices=["auto", "exhaustive", "sample"])
    p.add_argument("--samples", type=int, default=1_000_000)

    p = sub.add_parser("polygon", parents=[common], help="covering polygon certificate for a planar body")
    p.add_argument("--body", default="disk", help="disk, diamond, square, superellipse or lp:<p>")
    p.add_argument("--k", type=int, default=16)
    p.add_argument("--samples", type=int, default=10_000)

    p = sub.add_parser("capspace", parents=[common], help="build and certify the cap-cut norm on R^4")
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--pool", type=int, default=100_000)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--triples", type=int, default=100_000)
    p.add_argument("--survey", type=int, default=0, help="planes for the flatness survey (0 skips it)")
    p.add_argument("--save", help="write the cap space JSON here")
    p.add_argument("--load", help="load a saved cap space instead of building one")

    p = sub.add_parser("bend", parents=[common], help="sampled distortion check of a bending map")
    p.add_argument("--eps", type=float, default=0.2)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--c", type=float, default=4.0)
    p.add_argument("--Z", type=_family, default="l2")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--pairs", type=int, default=100_000)
    p.add_argument("--law", default="mixed", choices=["mixed", "log-uniform"])

    p = sub.add_parser("invariance", parents=[common], help="orthogonal invariance defect of a paired space")
    p.add_argument("--space", default="sum", choices=["sum", "cross"])
    p.add_argument("--Z", type=_family, default="l2", help="combiner family for --space sum")
    p.add_argument("--n1", type=int, default=2)
    p.add_argument("--n2", type=int, default=2)
    p.add_argument("--samples", type=int, default=20_000)
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--extract", action="store_true", help="also tabulate the recovered 2D norm")
    p.add_argument("--alpha", type=float, help="net fineness for the net-to-every bracket")
    p.add_argument("--A", type=float, default=1.0, help="projection norm bound for the bracket")
    return parser


def parse(argv) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
        cfg.pop("command", None)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = sorted(set(cfg) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        sub.set_defaults(**cfg)
        args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = default_threads()
    return args


# ---------------------------------------------------------------- commands


def _families(text: str):
    from .norms2d import parse_family

    return [parse_family(t.strip()) for t in text.split(",") if t.strip()]


def cmd_norms(args):
    from .norms2d import norm_constants, parse_family, validate_unconditional

    Z = parse_family(args.family)
    consts = norm_constants(Z, args.grid, args.lip_grid)
    val = validate_unconditional(Z, args.samples, args.seed)
    out = {"family": args.family, "constants": consts.to_dict(), "validation": val.to_dict()}
    return out, val.passed, None


def _body(name: str):
    from . import polygon_cover as pc

    table = {"disk": pc.disk, "diamond": pc.diamond, "square": pc.square, "superellipse": pc.superellipse}
    if name in table:
        return table[name]()
    if name.startswith("lp:"):
        try:
            return pc.LpBall(float(name[3:]))
        except ValueError as exc:
            raise UsageError(f"bad body {name!r}") from exc
    raise UsageError(f"unknown body {name!r}")


def cmd_polygon(args):
    from .polygon_cover import build_polygon, sample_profile, verify_containment

    profile = sample_profile(_body(args.body), args.k)
    poly = build_polygon(profile)
    cert = verify_containment(poly, profile, args.samples)
    out = {"body": args.body, "profile": profile.to_dict(), "polygon": poly.to_dict(), "certificate": cert.to_dict()}
    return out, cert.certified, lambda: svg.polygon_figure(profile, poly)


def cmd_capspace(args):
    from .capspace import CapSpace4, build_capspace, certify_properties, flatness_survey, structured_parameters

    C = CapSpace4.load(args.load) if args.load else build_capspace(args.delta, args.pool, args.seed)
    if args.save:
        C.save(args.save)
    cert = certify_properties(C, args.samples, args.triples, args.seed)
    sigma, tau, a = structured_parameters(C.delta)
    out = {
        "space": {k: v for k, v in C.to_dict().items() if k not in ("centers", "heights")},
        "caps": len(C.centers),
        "structured": {"sigma": sigma, "tau": tau, "a": a},
        "properties": cert.to_dict(),
    }
    ok = cert.passed
    if args.survey:
        s = flatness_survey(C, args.survey, seed=args.seed)
        out["flatness_survey"] = s.to_dict()
    return out, ok, None


def cmd_bend(args):
    from .bending import make_bending, spiral_trace, verify_distortion
    from .norms2d import parse_family

    T = make_bending(args.eps, args.r, parse_family(args.Z), args.dim, args.c)
    rep = verify_distortion(T, args.pairs, args.seed, args.law, threads=args.threads)
    out = {"params": T.params.to_dict(), "report": rep.to_dict()}

    def figure():
        xs, ys = spiral_trace(T)
        return svg.spiral_figure(xs, ys, T.params.log_r, T.params.log_R)

    return out, rep.passed, figure


def cmd_embed(args):
    from .annulus_embed import PointCloud, build_schedule, choose_parameters, embed_cloud, sample_cloud

    params = choose_parameters(args.eps)
    psi = params.psi if args.psi is None else args.psi
    d = params.d if args.d is None else args.d
    if args.psi is not None or args.d is not None:
        from .annulus_embed import ParamSet

        params = ParamSet(params.eps, params.gamma, psi, params.zeta, d, params.gammas)
    S = build_schedule(psi, args.eps, d, 8)
    if args.cloud:
        cloud = PointCloud.from_json(Path(args.cloud))
    elif args.random:
        if args.random < 1:
            raise UsageError("--random needs a positive count")
        cloud = sample_cloud(args.random, args.dim, S, args.periods, args.seed)
    else:
        raise UsageError("give --cloud or --random")
    _, _, report = embed_cloud(cloud, S, _families(args.Z), params, args.mode, args.samples, args.seed, args.threads)
    out = {"params": params.to_dict(), "report": report.to_dict()}
    return out, report.within_bound, lambda: svg.schedule_figure(report.schedule.log_radii)


def cmd_invariance(args):
    from .invariance import (
        cross_term_space,
        direct_sum_space,
        extract_Z,
        invariance_defect,
        net_to_every_bounds,
    )
    from .norms2d import parse_family

    if args.space == "sum":
        S = direct_sum_space(parse_family(args.Z), args.n1, args.n2)
    else:
        S = cross_term_space(args.n1, args.n2)
    d = invariance_defect(S, args.samples, args.seed, threads=args.threads)
    out = {"space": S.name, "n1": args.n1, "n2": args.n2, "defect": d.to_dict()}
    ok = d.eps <= args.tolerance
    if args.extract:
        try:
            Z = extract_Z(S, seed=args.seed)
            out["extracted"] = Z.describe()
        except NotInvariant as exc:
            out["extracted"] = {"refused": str(exc), "defect": exc.defect}
    if args.alpha is not None:
        out["net_to_every"] = list(net_to_every_bounds(args.alpha, args.A))
    return out, ok, None


COMMANDS = {
    "norms": cmd_norms,
    "embed": cmd_embed,
    "polygon": cmd_polygon,
    "capspace": cmd_capspace,
    "bend": cmd_bend,
    "invariance": cmd_invariance,
}


def run(argv=None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    try:
        args = parse(argv)
        out, ok, figure = COMMANDS[args.command](args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (SpiralbendError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    doc = {"schema": SCHEMA, "command": args.command, "seed": args.seed, "passed": bool(ok), **out}
    if figure is not None and not args.json_only:
        path = args.svg or f"{args.command}.svg"
        svg.write(path, figure())
        doc["svg"] = path
    text = json.dumps(jsonable(doc), sort_keys=True, indent=2)
    print(text, file=stdout)
    if args.out:
        Path(args.out).write_text(text + "\n")
    return EXIT_PASS if ok else EXIT_FAIL


def main(argv=None) -> None:
    sys.exit(run(argv))


__all__ = ["main", "run", "build_parser"]

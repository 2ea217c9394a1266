"""Command-line entry point.

Exit status: 0 when the property holds / the problem is feasible, 1 when it
fails / is infeasible, 2 on usage or input errors.
"""

import argparse
import json
import logging
import os
import sys
import time

import numpy as np

from .errors import MintyError, SelectionCapExceeded
from .gamma_map import build_gamma_system, check_kkm, selection_cap
from .minty_vi import MVIProblem, construct_witness, solve_mvi
from .operator_graph import is_monotone, is_quasimonotone
from .polyhedra import Tolerance, VPolytope
from .render import render_coverage
from .report import (InstanceError, feasibility_dict, load_instance,
                     render_report, violation_dict)
from .suite import run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _floats(text, dim, what):
    try:
        vals = [float(t) for t in text.split(",")] if text.strip() else []
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated numbers, got {text!r}") from None
    if len(vals) != dim:
        raise UsageError(f"{what} has {len(vals)} components, instance dim is {dim}")
    return np.array(vals)


def _xstar(args, T):
    if args.xstar is None:
        return np.zeros(T.dim)
    return _floats(args.xstar, T.dim, "--xstar")


def _subset(args, T):
    if args.subset is None or args.subset.strip() == "all":
        return T.domain_indices()
    try:
        return [int(t) for t in args.subset.split(",")]
    except ValueError:
        raise UsageError("--subset: expected 'all' or comma-separated ints") from None


def _tolerance(args):
    kw = {name: getattr(args, name, None)
          for name in ("eq_tol", "strict_margin", "fip_tol")}
    try:
        return Tolerance.from_overrides(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _label(T, path):
    return T.label if T.label is not None else os.path.basename(path)


def _report(command, label, tol, body, started):
    out = {"command": command, "instance_label": label}
    out.update(body)
    out["tolerance"] = tol.as_dict()
    out["elapsed_ms"] = round((time.perf_counter() - started) * 1e3, 3)
    return out


def cmd_check(args):
    tol = _tolerance(args)
    T = load_instance(args.file)
    fn = is_monotone if args.kind == "monotone" else is_quasimonotone
    v = fn(T, tol)
    body = {"kind": args.kind, "holds": v.holds, "violation": violation_dict(v.violation)}
    return body, _label(T, args.file), tol, EXIT_OK if v.holds else EXIT_FAIL


def cmd_kkm(args):
    tol = _tolerance(args)
    T = load_instance(args.file)
    xstar = _xstar(args, T)
    A = _subset(args, T)
    try:
        sys_ = build_gamma_system(T, A, xstar)
    except (IndexError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    v = check_kkm(sys_, tol)
    body = {"xstar": xstar, "subset": list(sys_.base_indices), "holds": v.holds,
            "counterexample": None if v.holds else
            {"point": v.point, "selection": list(v.selection), "slack": v.slack},
            "selection_cap": selection_cap()}
    return body, _label(T, args.file), tol, EXIT_OK if v.holds else EXIT_FAIL


def _parse_K(text, T):
    if text is None or text.strip() == "hull":
        if len(T) == 0:
            raise UsageError("--K hull needs at least one instance point")
        return VPolytope(T.points)
    try:
        verts = np.array(json.loads(text), dtype=float)
    except (json.JSONDecodeError, ValueError, TypeError):
        raise UsageError("--K: expected 'hull' or a JSON list of vertices") from None
    if verts.ndim != 2 or verts.shape[1] != T.dim or verts.shape[0] == 0:
        raise UsageError(f"--K vertices must be a non-empty list of {T.dim}-vectors")
    return VPolytope(verts)


def cmd_mvi(args):
    tol = _tolerance(args)
    T = load_instance(args.file)
    xstar = _xstar(args, T)
    K = _parse_K(args.K, T)
    res = solve_mvi(MVIProblem(T, xstar, K), tol)
    body = {"xstar": xstar, "K": K.vertices}
    body.update(feasibility_dict(res))
    return body, _label(T, args.file), tol, EXIT_OK if res.feasible else EXIT_FAIL


def cmd_witness(args):
    tol = _tolerance(args)
    T = load_instance(args.file)
    v = is_monotone(T, tol)
    if v.holds:
        body = {"message": "no violation pair", "holds": True}
        return body, _label(T, args.file), tol, EXIT_FAIL
    w = construct_witness(v.violation.pair, tol)
    res = solve_mvi(w.problem(), tol)
    (x, xs), (y, ys) = w.pair
    body = {"zstar": w.zstar, "pair": {"x": x, "xstar": xs, "y": y, "ystar": ys},
            "entries": list(v.violation.entries), "delta": w.delta,
            "a": w.a, "b": w.b, "mvi": feasibility_dict(res),
            "confirmed": not res.feasible}
    return body, _label(T, args.file), tol, EXIT_OK if not res.feasible else EXIT_FAIL


def cmd_suite(args):
    try:
        with open(args.config) as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read suite config: {exc}") from None
    if not isinstance(config, dict) or not isinstance(config.get("suites", []), list):
        raise UsageError("suite config must be an object with a 'suites' list")
    if args.seed:
        for entry in config.get("suites", []):
            entry["seed"] = int(entry["seed"]) + args.seed
    tol_kw = dict(config.get("tolerance", {}))
    for name in ("eq_tol", "strict_margin", "fip_tol"):
        if getattr(args, name) is not None:
            tol_kw[name] = getattr(args, name)
    try:
        tol = Tolerance.from_overrides(**tol_kw)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad tolerance: {exc}") from None
    try:
        body = run_suite(config, tol)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad suite entry: {exc}") from None
    return body, args.config, tol, EXIT_OK if body["ok"] else EXIT_FAIL


def cmd_render(args):
    tol = _tolerance(args)
    T = load_instance(args.file)
    if T.dim != 2:
        raise UsageError(f"render needs dim 2, instance has dim {T.dim}")
    xstar = _xstar(args, T)
    A = _subset(args, T)
    try:
        svg = render_coverage(T, xstar, A, tol)
    except (IndexError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    try:
        with open(args.out, "w") as fh:
            fh.write(svg)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}") from None
    body = {"out": args.out, "xstar": xstar, "subset": A}
    return body, _label(T, args.file), tol, EXIT_OK


def _add_tol_flags(p):
    p.add_argument("--eq-tol", dest="eq_tol", type=float)
    p.add_argument("--strict-margin", dest="strict_margin", type=float)
    p.add_argument("--fip-tol", dest="fip_tol", type=float)
    p.add_argument("--format", choices=["json"], default="json")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mintykit",
        description="Monotonicity, KKM and Minty VI checks on finite operator graphs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="pairwise monotone / quasimonotone check")
    p.add_argument("kind", choices=["monotone", "quasimonotone"])
    p.add_argument("file")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("kkm", help="KKM covering check of Gamma_{T - x*}")
    p.add_argument("file")
    p.add_argument("--xstar")
    p.add_argument("--subset", default="all")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_kkm)

    p = sub.add_parser("mvi", help="solve the Minty VI over a polytope")
    p.add_argument("file")
    p.add_argument("--xstar")
    p.add_argument("--K", default="hull")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_mvi)

    p = sub.add_parser("witness", help="shift z* certifying non-monotonicity")
    p.add_argument("file")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("suite", help="run the randomized equivalence battery")
    p.add_argument("config")
    p.add_argument("--seed", type=int, default=0,
                   help="offset added to every suite seed")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("render", help="SVG picture of Gamma coverage (2-D)")
    p.add_argument("file")
    p.add_argument("--xstar")
    p.add_argument("--subset", default="all")
    p.add_argument("--out", required=True)
    _add_tol_flags(p)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    started = time.perf_counter()
    try:
        body, label, tol, code = args.func(args)
    except SelectionCapExceeded as exc:
        print(f"error: {exc} (product {exc.product}, cap {exc.cap})", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, InstanceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MintyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(render_report(_report(args.command, label, tol, body, started)))
    return code


if __name__ == "__main__":
    sys.exit(main())

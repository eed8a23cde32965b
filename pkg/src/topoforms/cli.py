"""``topoforms`` command-line harness.

Every command prints one JSON report line on stdout. Exit status is 0 when
the report passes, 1 when a verification fails and 2 on usage errors.
"""
import argparse
import csv
import datetime
import hashlib
import json
import math
import sys

import numpy as np

from . import fields, tff, verify
from .groupfield import GroupElementField, boundary_deviation, winding_number
from .lattice import GridSpec, VectorField
from .liealg import check_symmetric_pair, load_algebra, structure_constants
from .topo import helicity

FIELD_KINDS = ("random-bandlimited", "abc-flow", "hedgehog", "euler-random", "flux-tubes")


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def render(report, timestamp=True):
    """One JSON line; keys sorted so equal reports give equal bytes."""
    doc = {"schema_version": verify.SCHEMA_VERSION}
    doc.update(report)
    if timestamp:
        doc["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return json.dumps(doc, sort_keys=True, default=_jsonable)


def _parse_tol(items):
    out = {}
    for item in items or ():
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects KEY=VALUE, got {item!r}")
        try:
            out[key] = float(val)
        except ValueError:
            raise UsageError(f"--tol value for {key!r} is not a number") from None
    try:
        verify.tolerances(out)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    return out


def _write_csv(path, rows):
    scalar = sorted({k for r in rows for k, v in r.items()
                     if isinstance(v, (int, float, str)) or v is None})
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=scalar, extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow(r)


# ------------------------------------------------------------------ commands

def cmd_verify(args):
    tol = _parse_tol(args.tol)
    if args.what == "divergence":
        if args.dim is None:
            raise UsageError("verify divergence needs --dim {2,4}")
        return verify.divergence(args.dim, args.seed, args.algebra, args.levels, tol)
    if args.what == "clebsch":
        return verify.clebsch(args.mode, args.seed, args.levels, tol)
    if args.what == "flatness":
        return verify.flatness(args.mode, args.seed, args.levels, tol)
    if args.what == "coincidence":
        if not args.pair:
            raise UsageError("verify coincidence needs --pair <pair.json>")
        _, pair = load_algebra(args.pair)
        if pair is None:
            raise UsageError(f"{args.pair} defines no pair (missing 'pair' entry)")
        return verify.coincidence(pair, args.mode, args.seed, args.seeds, args.levels, tol)
    raise UsageError(f"unknown verification {args.what!r}")


def _read_field(path, components):
    grid, data = tff.read(path)
    if data.shape[0] != components:
        raise UsageError(f"{path} holds {data.shape[0]} components, expected {components}")
    return grid, data


def cmd_winding(args):
    tol = verify.tolerances(_parse_tol(args.tol))
    grid, data = _read_field(args.file, 4)
    g = GroupElementField(grid, data)
    W = winding_number(g)
    k = int(round(W))
    dev = abs(W - k)
    rep = {"command": "winding", "file": args.file, "W": W, "nearest_integer": k,
           "deviation": dev, "pass": dev < tol["winding"], "tolerances": {"winding": tol["winding"]}}
    if not grid.periodic:
        rep["boundary_deviation"] = boundary_deviation(g)
    return rep


def cmd_helicity(args):
    tol = verify.tolerances(_parse_tol(args.tol))
    grid, data = _read_field(args.file, 3)
    value = helicity(VectorField(grid, data))
    rep = {"command": "helicity", "file": args.file, "helicity": value,
           "pass": math.isfinite(value), "tolerances": {}}
    if args.expect is not None:
        rel = abs(value - args.expect) / abs(args.expect)
        rep.update(expected=args.expect, relative_error=rel, tolerances={
            "helicity_rel": tol["helicity_rel"]})
        rep["pass"] = rel < tol["helicity_rel"]
    return rep


def cmd_algebra(args):
    tol = verify.tolerances(_parse_tol(args.tol))
    alg, pair = load_algebra(args.file)
    jac = structure_constants(alg).jacobi_residual
    rep = {"command": "algebra check", "file": args.file, "name": alg.name,
           "dim": alg.dim, "jacobi_residual": jac,
           "tolerances": {"pair": tol["pair"], "jacobi": tol["jacobi"]}}
    ok = jac < tol["jacobi"]
    if pair is not None:
        pr = check_symmetric_pair(pair, tol["pair"])
        rep["pair_report"] = pr.to_dict()
        ok = ok and pr.passed
    rep["pass"] = bool(ok)
    return rep


def _generate(args):
    n = args.n
    if args.kind == "random-bandlimited":
        grid = GridSpec.periodic_box((n,) * 3)
        v, _ = fields.bandlimited(grid, np.random.default_rng(args.seed), 3, kmax=args.kmax)
        return grid, v
    if args.kind == "abc-flow":
        grid = GridSpec.periodic_box((n,) * 3)
        return grid, fields.abc_flow(grid, *args.abc)
    if args.kind == "hedgehog":
        grid = GridSpec.open_box((n,) * 3, -1.0, 1.0)
        return grid, fields.hedgehog(grid, profile=args.profile).q
    if args.kind == "euler-random":
        grid = GridSpec.periodic_box((n,) * 3)
        _, g = fields.euler_random(grid, args.seed, kmax=args.kmax)
        return grid, g.q
    if args.kind == "flux-tubes":
        grid = GridSpec.open_box((n,) * 3, (-1.5, -1.5, -1.5), (2.5, 1.5, 1.5))
        return grid, fields.flux_tubes(grid, flux1=args.flux[0], flux2=args.flux[1])
    raise UsageError(f"unknown field kind {args.kind!r}")


def cmd_gen_field(args):
    if not args.out:
        raise UsageError("gen-field needs --out <file.tff>")
    grid, data = _generate(args)
    blob = tff.dumps(grid, data)
    with open(args.out, "wb") as fh:
        fh.write(blob)
    return {"command": "gen-field", "kind": args.kind, "seed": args.seed, "path": args.out,
            "header": tff.header_for(grid, data.shape[0]),
            "sha256": hashlib.sha256(blob).hexdigest(), "pass": True, "tolerances": {}}


# -------------------------------------------------------------------- parser

def _common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", action="append", metavar="KEY=VALUE",
                   help="override a tolerance; repeatable")
    p.add_argument("--csv", metavar="PATH", help="also write the per-level rows as CSV")
    p.add_argument("--no-timestamp", action="store_true",
                   help="omit the timestamp field from the report")


def build_parser():
    ap = argparse.ArgumentParser(prog="topoforms", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a seeded identity check")
    v.add_argument("what", choices=["divergence", "clebsch", "coincidence", "flatness"])
    v.add_argument("--dim", type=int, choices=[2, 4])
    v.add_argument("--algebra", choices=["u1", "su2"])
    v.add_argument("--mode", choices=["analytic", "fd"], default="analytic")
    v.add_argument("--levels", type=int, default=3)
    v.add_argument("--pair", metavar="PAIR.json")
    v.add_argument("--seeds", type=int, default=10, help="seed count for coincidence runs")
    v.add_argument("--out", metavar="PATH", help="also write the report to PATH")
    _common(v)
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("winding", help="winding number of a quaternion TFF1 field")
    w.add_argument("file")
    _common(w)
    w.set_defaults(func=cmd_winding)

    h = sub.add_parser("helicity", help="integral of v . curl v for a vector TFF1 field")
    h.add_argument("file")
    h.add_argument("--expect", type=float, help="reference value for a relative check")
    _common(h)
    h.set_defaults(func=cmd_helicity)

    a = sub.add_parser("algebra", help="Lie algebra utilities")
    a.add_argument("action", choices=["check"])
    a.add_argument("file")
    _common(a)
    a.set_defaults(func=cmd_algebra)

    g = sub.add_parser("gen-field", help="write a seeded test field as TFF1")
    g.add_argument("kind", choices=FIELD_KINDS)
    g.add_argument("--n", type=int, default=32, help="samples per axis")
    g.add_argument("--kmax", type=int, default=2)
    g.add_argument("--abc", type=float, nargs=3, default=(1.0, 1.0, 1.0), metavar=("A", "B", "C"))
    g.add_argument("--profile", choices=["linear", "smooth"], default="linear")
    g.add_argument("--flux", type=float, nargs=2, default=(1.0, 1.0))
    g.add_argument("--out", metavar="PATH")
    _common(g)
    g.set_defaults(func=cmd_gen_field)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        report = args.func(args)
    except (UsageError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if exc.args else exc
        print(f"topoforms: error: {msg}", file=sys.stderr)
        return 2
    line = render(report, timestamp=not args.no_timestamp)
    print(line)
    if getattr(args, "out", None) and args.command == "verify":
        with open(args.out, "w") as fh:
            fh.write(line + "\n")
    if args.csv:
        _write_csv(args.csv, report.get("levels", [report]))
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())

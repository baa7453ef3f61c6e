"""Command line entry point: ``qitorsion <subcommand> ...``.

Exit codes: 0 success, 1 usage or domain error, 2 validation failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .census import (
    DEFAULT_GRID,
    S2Config,
    census,
    census_metadata,
    coprimality_probe,
    estimate_all,
    family_count,
    lemma46_probe,
    read_census_csv,
    write_census_csv,
)
from .curve import parse_curve, point_order
from .errors import DataIntegrityError, DomainError, UsageError, ValidationFailure
from .families import FamilyRecord, TateForm, convert_tate, exponent, lookup, RationalFunction
from .poly import parse_poly
from .torsion import compute_torsion


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _grid(args) -> list[int]:
    if args.grid:
        grid = [int(float(x)) for x in args.grid.split(",") if x.strip()]
        if max(grid) > args.xmax:
            raise UsageError("grid points must not exceed --xmax")
        return grid
    return [x for x in DEFAULT_GRID if x < args.xmax] + [args.xmax]


def _cmd_census(args):
    grid = _grid(args)
    groups = args.groups.split(",") if args.groups else None
    records = census(grid, groups=groups, workers=args.workers, tally=args.tally)
    meta = census_metadata(grid, args.tally, args.workers)
    if args.json:
        text = json.dumps(
            {"metadata": meta, "records": [{"group": str(r.group), "X": r.X, "count": r.count} for r in records]},
            indent=1,
        ) + "\n"
    else:
        text = write_census_csv(records)
    if args.out:
        Path(args.out).write_text(text, newline="\n")
        Path(args.out + ".meta.json").write_text(json.dumps(meta, indent=1) + "\n")
    else:
        sys.stdout.write(text)


def _fmt(v) -> str:
    if v is None:
        return "NA"
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _cmd_estimate(args):
    try:
        text = Path(args.infile).read_text()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    est = estimate_all(read_census_csv(text), args.min_count)
    out = ["group,inv_d_est,d_est,d_paper,residual"]
    for e in est:
        out.append(",".join([str(e.group), _fmt(e.inv_d_est), _fmt(e.d_est), _fmt(e.d_paper), _fmt(e.residual)]))
    print("\n".join(out))


def _cmd_torsion(args):
    c = parse_curve(args.curve).require_nonsingular()
    res = compute_torsion(c)
    pts = sorted(res.points, key=lambda P: (point_order(c, P, 18), str(P)))
    if args.json:
        print(json.dumps({
            "curve": str(c),
            "torsion": str(res.label),
            "points": [{"point": str(P), "order": point_order(c, P, 18)} for P in pts],
        }))
        return
    print(res.label)
    for P in pts:
        print(f"{P}\torder {point_order(c, P, 18)}")


def _ratfun(text: str) -> RationalFunction:
    """``poly`` or ``(poly)/(poly)``."""
    t = text.replace(" ", "")
    if t.startswith("(") and ")/(" in t and t.endswith(")"):
        depth = 0
        for k, ch in enumerate(t):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0:
                break
        if t[k + 1 : k + 3] == "/(":
            return RationalFunction(parse_poly(t[1:k]), parse_poly(t[k + 3 : -1]))
    return RationalFunction(parse_poly(t))


def _cmd_tate(args):
    sf = convert_tate(TateForm(_ratfun(args.a), _ratfun(args.b), _ratfun(args.d)))
    if sf.degenerate:
        raise DomainError("the Tate form is degenerate (f = g = 0)")
    r, s = sf.f.degree, sf.g.degree
    n, m, d = exponent(r, s)
    print(f"f = {sf.f}")
    print(f"g = {sf.g}")
    print(f"r = {r}\ns = {s}\nn = {n}\nm = {m}\nd = {d}")


def _cmd_family(args):
    cfg = S2Config(args.group, args.x, args.kappa)
    res = family_count(cfg, validate=not args.no_validate)
    print(f"s2 = {res.s2_size}\ns3 = {res.s3_size}\ns = {res.s_size}")
    print(f"max fiber S2->S3 = {res.max_fiber_s3}\nmax fiber S3->S = {res.max_fiber_s}")
    print(f"max val_p gcd(A^3,B^2) = {res.max_gcd_valuation}")


def _cmd_probe(args):
    if args.coprimality:
        print(f"{coprimality_probe(args.samples, args.bound, args.seed):.6f}")
        return
    if not args.group:
        raise UsageError("--lemma46 needs --group")
    fr = lookup(args.group)
    if not isinstance(fr, FamilyRecord):
        raise DomainError(f"{args.group} has no finite-d family")
    rep = lemma46_probe(fr, args.samples, args.seed)
    print(f"{rep.group}: {len(rep.q_set)} distinct q over {rep.samples} samples")
    for q, k in sorted(rep.q_counts.items(), key=lambda qk: (-qk[1], str(qk[0]))):
        print(f"{q}\t{k}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qitorsion", description="Torsion of elliptic curves over Q(i) counted by height.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    c = sub.add_parser("census", help="count minimal curves by torsion group")
    c.add_argument("--xmax", type=int, required=True)
    c.add_argument("--grid")
    c.add_argument("--groups")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--tally", choices=("equals", "contains"), default="equals")
    c.add_argument("--json", action="store_true")
    c.add_argument("--out")
    c.set_defaults(func=_cmd_census)

    e = sub.add_parser("estimate-d", help="fit log count against log X")
    e.add_argument("--in", dest="infile", required=True)
    e.add_argument("--min-count", type=int, default=5)
    e.set_defaults(func=_cmd_estimate)

    t = sub.add_parser("torsion", help="torsion subgroup of one curve")
    t.add_argument("--curve", required=True, help='"[A,B]", e.g. "[-1,0]" or "[1+i,2]"')
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=_cmd_torsion)

    tc = sub.add_parser("tate-convert", help="Tate normal form to short Weierstrass form")
    for name in ("a", "b", "d"):
        tc.add_argument(f"--{name}", required=True)
    tc.set_defaults(func=_cmd_tate)

    f = sub.add_parser("family-count", help="sizes of S2, S3, S for a family")
    f.add_argument("--group", required=True)
    f.add_argument("--x", type=int, required=True)
    f.add_argument("--kappa", type=float, default=0.5)
    f.add_argument("--no-validate", action="store_true")
    f.set_defaults(func=_cmd_family)

    pr = sub.add_parser("probe", help="empirical probes")
    mode = pr.add_mutually_exclusive_group(required=True)
    mode.add_argument("--coprimality", action="store_true")
    mode.add_argument("--lemma46", action="store_true")
    pr.add_argument("--samples", type=int, default=10**4)
    pr.add_argument("--bound", type=int, default=10**6)
    pr.add_argument("--group")
    pr.add_argument("--seed", type=int, default=0)
    pr.set_defaults(func=_cmd_probe)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValidationFailure as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 2
    except (UsageError, DomainError, DataIntegrityError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

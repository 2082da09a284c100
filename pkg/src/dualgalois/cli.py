"""Command line interface.

Exit codes: 0 success with a positive verdict, 2 the computation ran but a
verdict or validation failed, 1 operational error (bad input, numerical
failure).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

from . import localgeom as lg
from .curve import CurveError, load_curve
from .partitions import Partition
from .permgroup import PermGroup, Permutation, check_prop_conditions, fixed_point_partitions
from .pipeline import CertificateError, PipelineError, PipelineOptions, run_pipeline, transposition_certificate
from .report import emit_report, to_json

log = logging.getLogger("dualgalois")

EXIT_OK, EXIT_ERROR, EXIT_FINDING = 0, 1, 2


def _options(args):
    opts = PipelineOptions(seed=args.seed, threads=args.threads)
    if getattr(args, "tol", None) is not None:
        opts = replace(opts, newton_tol=args.tol)
    if getattr(args, "samples", None) is not None:
        opts = replace(opts, samples=args.samples)
    if getattr(args, "no_flexes", False):
        opts = replace(opts, include_flexes=False)
    return opts


def _write(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_compute(args):
    curve = load_curve(args.curve)
    report = run_pipeline(curve, seed=args.seed, opts=_options(args))
    if args.out:
        emit_report(report, args.out, "json")
    if args.svg:
        emit_report(report, args.svg, "svg")
    gens = ", ".join(str(p) for p in report.permutations)
    print(f"degree {report.degree}, components {curve.degrees}, "
          f"{len(report.pencil.branch_points)} branch points", file=sys.stderr)
    print(f"generators: {gens}", file=sys.stderr)
    print(f"group order {report.group_order}, component partition {report.components}, "
          f"verdict {report.theorem1_verdict}", file=sys.stderr)
    for stage, sec in report.timings.items():
        log.info("%s: %.2fs", stage, sec)
    if not args.out:
        sys.stdout.write(to_json(report))
    ok = (report.theorem1_verdict and report.line_sheets_fixed
          and report.petal_product_identity and report.cycle_types_match)
    return EXIT_OK if ok else EXIT_FINDING


def cmd_transpose(args):
    curve = load_curve(args.curve)
    report = run_pipeline(curve, seed=args.seed, opts=_options(args))
    cert = transposition_certificate(report, args.i, args.j)
    _write(to_json(cert), args.out)
    print(f"word {cert.word}: tracked permutation {cert.permutation}, "
          f"validated {cert.validated}", file=sys.stderr)
    return EXIT_OK if cert.validated else EXIT_FINDING


def _parse_point(text):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError("--point needs three comma separated coordinates")
    return tuple(lg.MP.mpc(complex(p.replace("i", "j"))) for p in parts)


def cmd_local(args):
    curve = load_curve(args.curve)
    out = {"curve": curve.summary(), "rows": []}
    if args.point:
        P = _parse_point(args.point)
        rows = [("point", br) for br in lg.branches_at(curve, P)]
    else:
        rows = lg.local_table(curve, seed=args.seed, include_flexes=not args.no_flexes)
    ok = True
    for kind, br in rows:
        row = {"kind": kind, **br.to_dict(), "local_degree_check": None}
        if br.s is not None:
            rep = lg.local_degree_check(br)
            row["local_degree_check"] = rep.to_dict()
            ok = ok and rep.passed
        out["rows"].append(row)
    _write(to_json(out), args.out)
    return EXIT_OK if ok else EXIT_FINDING


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def cmd_check_group(args):
    """Generators file: a list of 1-based image arrays (or ``{"generators": [...]}``).
    Partitions file: ``{"candidate": blocks, "families": [[blocks, ...] or null, ...]}``
    with one family per non-transposition generator; missing families are
    built from fixed points and the candidate (or the orbit partition)."""
    data = _load_json(args.generators)
    if isinstance(data, dict):
        data = data.get("generators")
    if not isinstance(data, list) or not data:
        raise ValueError("generators file must hold a nonempty list of image arrays")
    gens = [Permutation(g) for g in data]
    d = gens[0].degree
    parts = _load_json(args.partitions) if args.partitions else {}
    candidate = Partition(d, tuple(map(tuple, parts["candidate"]))) if parts.get("candidate") else None
    transpositions = [g for g in gens if g.is_transposition()]
    sigmas = [g for g in gens if not g.is_transposition() and not g.is_identity()]
    families = parts.get("families") or [None] * len(sigmas)
    if len(families) != len(sigmas):
        raise ValueError(f"expected {len(sigmas)} partition families, got {len(families)}")
    comps = candidate or PermGroup(gens, degree=d).orbits()
    fam_parts = []
    for s, fam in zip(sigmas, families):
        if fam is None:
            fam_parts.append(fixed_point_partitions(s, comps))
        else:
            fam_parts.append([Partition(d, tuple(map(tuple, J))) for J in fam])
    rep = check_prop_conditions(transpositions, sigmas, fam_parts, candidate=candidate)
    _write(to_json(rep), args.out)
    return EXIT_OK if rep.passed else EXIT_FINDING


def build_parser():
    p = argparse.ArgumentParser(prog="dualgalois", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--curve", required=True, help="curve JSON file")
        if seed:
            sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=None,
                        help="tracking threads (default: $GALOIS_THREADS or min(4, cpus))")
        sp.add_argument("--no-flexes", action="store_true", help="skip flex points in the local table")

    c = sub.add_parser("compute", help="monodromy group and verdict for a curve")
    common(c)
    c.add_argument("--tol", type=float, default=None, help="Newton residual tolerance")
    c.add_argument("--samples", type=int, default=None, help="vertices per petal circle")
    c.add_argument("--out", help="JSON report path (default: stdout)")
    c.add_argument("--svg", help="SVG figure path")
    c.set_defaults(func=cmd_compute)

    t = sub.add_parser("transpose", help="certified loop for the transposition (i j)")
    common(t)
    t.add_argument("--i", type=int, required=True)
    t.add_argument("--j", type=int, required=True)
    t.add_argument("--tol", type=float, default=None)
    t.add_argument("--out")
    t.set_defaults(func=cmd_transpose)

    lo = sub.add_parser("local", help="branch data at singular points and flexes, or at one point")
    common(lo)
    lo.add_argument("--point", help='projective point "x,y,z" (complex like 1+2j allowed)')
    lo.add_argument("--out")
    lo.set_defaults(func=cmd_local)

    g = sub.add_parser("check-group", help="run the group criteria on raw generators")
    g.add_argument("--generators", required=True)
    g.add_argument("--partitions")
    g.add_argument("--out")
    g.set_defaults(func=cmd_check_group)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CurveError as exc:
        print(f"error ({exc.code}): {exc}", file=sys.stderr)
    except (PipelineError, CertificateError, lg.LocalGeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Subcommands: enumerate, density, product-table, build-sdp, verify-cert,
construct, intopt, probsearch, oracle, make-cert.  Every subcommand is
deterministic given its inputs; --workers changes wall time only, never
output bytes.  Exit codes: 0 success/pass, 1 verification fail, 2 usage
error, 3 internal precision error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_PRECISION = 3


def _write(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _parse_type(spec: str, l: int):
    """Type spec: 'dot', 'trivial', a named catalog type (tau1/tau2), or a
    graph6 string of the fully labeled type graph."""
    from . import flags, graphs
    from . import fixtures

    if spec == "trivial":
        return flags.trivial_type(l)
    if spec == "dot":
        return flags.dot_type(l)
    try:
        catalog = fixtures.type_catalog(l)
    except FileNotFoundError:
        catalog = {}
    if spec in catalog:
        return catalog[spec]
    return flags.TypeGraph(graphs.from_graph6(spec), l)


def cmd_enumerate(args) -> int:
    from . import algebra, flags, graphs

    if args.flags_type is not None:
        type_ = _parse_type(args.flags_type, args.l)
        fam = algebra.flag_family(type_, args.n)
        rows = [{"index": i,
                 "graph6": graphs.to_graph6(m.graph),
                 "labeled": [v + 1 for v in m.labeled]}
                for i, m in enumerate(fam.members)]
        if args.format == "json":
            _write(_json_dump({"count": len(rows), "flags": rows}), args.out)
        else:
            lines = [f"{r['index']}\t{r['graph6']}\tlabels={r['labeled']}"
                     for r in rows]
            _write("\n".join([f"count {len(rows)}"] + lines) + "\n", args.out)
        return EXIT_OK
    basis = algebra.graph_basis(args.n, args.l)
    codes = [graphs.canonical_graph6(g) for g in basis.members]
    if args.format == "json":
        _write(_json_dump({"count": len(codes), "graphs": codes}), args.out)
    elif args.format == "graph6":
        _write("\n".join(codes) + "\n", args.out)
    else:
        lines = [f"{i}\t{c}" for i, c in enumerate(codes)]
        _write("\n".join([f"count {len(codes)}"] + lines) + "\n", args.out)
    return EXIT_OK


def _parse_labels(spec: str | None) -> tuple[int, ...]:
    if not spec:
        return ()
    return tuple(int(v) - 1 for v in spec.split(","))


def cmd_density(args) -> int:
    from . import algebra, flags, graphs

    host = graphs.from_graph6(args.host)
    target = graphs.from_graph6(args.target)
    tlab = _parse_labels(args.target_labels)
    hlab = _parse_labels(args.host_labels)
    if not tlab and not hlab:
        val = graphs.induced_density(target, host)
        obj = {"host": args.host, "target": args.target,
               "count": graphs.count_induced(target, host),
               "density": str(val)}
        label = f"p({args.target}; {args.host})"
    else:
        if args.l is None:
            print("typed densities need --l", file=sys.stderr)
            return EXIT_USAGE
        sigma = target.induced(tlab) if tlab else None
        type_ = flags.TypeGraph(sigma, args.l) if tlab \
            else flags.trivial_type(args.l)
        tflag = flags.Flag(target, tlab, type_)
        if hlab:
            hflag = flags.Flag(host, hlab, type_)
            val = algebra.p_density([tflag], hflag)
            label = f"p_sigma({args.target}; {args.host})"
        else:
            val = algebra.d_density([tflag], host)
            label = f"d_sigma({args.target}; {args.host})"
        obj = {"host": args.host, "target": args.target,
               "target_labels": [v + 1 for v in tlab],
               "host_labels": [v + 1 for v in hlab],
               "forbidden_l": args.l, "density": str(val)}
    if args.format == "json":
        _write(_json_dump(obj), args.out)
    else:
        _write(f"{label} = {val}\n", args.out)
    return EXIT_OK


def cmd_product_table(args) -> int:
    from . import algebra, graphs

    type_ = _parse_type(args.type, args.l)
    table = algebra.product_table(type_, args.flag_size, args.size)
    fam = algebra.flag_family(type_, args.flag_size)
    hosts = algebra.flag_family(type_, args.size)
    obj = {
        "type": graphs.to_graph6(type_.sigma) if type_.sigma else "",
        "forbidden_l": args.l,
        "flag_size": args.flag_size,
        "output_size": args.size,
        "family_fingerprint": fam.fingerprint(),
        "hosts": [graphs.to_graph6(h.graph) for h in hosts.members],
        "table": [[[str(v) for v in row] for row in mat] for mat in table],
    }
    _write(_json_dump(obj), args.out)
    return EXIT_OK


def cmd_build_sdp(args) -> int:
    from . import graphs, sdp

    with open(args.spec) as fh:
        spec = json.load(fh)
    l = spec["forbidden_l"]
    target = graphs.from_graph6(spec["target"])
    blocks = [(_parse_type(b["type"], l), int(b["flag_size"]))
              for b in spec["blocks"]]
    prob = sdp.build_problem(target, l, spec["t"], blocks,
                             workers=args.workers)
    out = args.out or "problem.dat-s"
    sdp.emit_sdpa(prob, out)
    if args.audit:
        sdp.dump_problem_json(prob, args.audit)
    if args.verbose:
        print(f"wrote {out}: {prob.num_free_variables} free variables, "
              f"{len(prob.blocks)} PSD blocks, {len(prob.basis)} constraints",
              file=sys.stderr)
    return EXIT_OK


def cmd_verify_cert(args) -> int:
    from . import certify

    cert = certify.load_certificate(args.certificate)
    report = certify.verify(cert)
    if args.format == "json":
        _write(_json_dump(report.to_json_obj()), args.out)
    else:
        _write(report.table() + "\n", args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_make_cert(args) -> int:
    from . import certify
    from .fixtures import certificates

    builder = certificates.BUILDERS.get(args.name)
    if builder is None:
        print(f"unknown certificate {args.name!r}; choose from "
              f"{sorted(certificates.BUILDERS)}", file=sys.stderr)
        return EXIT_USAGE
    cert = builder()
    out = args.out or f"{args.name}.json"
    certify.save_certificate(cert, out)
    return EXIT_OK


def cmd_construct(args) -> int:
    from . import constructions as cons
    from fractions import Fraction
    from math import comb

    if args.what == "c5":
        sizes = cons.c5_extremal_sizes(args.n)
        t4 = cons.f43_construction_value(args.n)
        row = {"n": args.n, "sizes": list(sizes), "t4": t4,
               "ratio": str(Fraction(t4, comb(args.n, 4))) if args.n >= 4 else None}
    else:
        spec = cons.turan_complement(args.n, args.parts)
        t3 = cons.count_cliques_blowup(spec, 3)
        row = {"n": args.n, "sizes": list(spec.sizes), "t3": t3,
               "f34_formula": cons.f34_formula(args.n) if args.parts == 3 else None}
    if args.format == "csv":
        keys = list(row)
        _write(",".join(keys) + "\n" +
               ",".join(str(row[k]).replace(" ", "") for k in keys) + "\n",
               args.out)
    else:
        _write(_json_dump(row), args.out)
    return EXIT_OK


def cmd_intopt(args) -> int:
    from . import constructions as cons

    best, orbits = cons.intopt_bruteforce(args.n, Fraction(args.epsilon))
    obj = {"n": args.n, "epsilon": args.epsilon, "minimum": best,
           "orbits": [list(o) for o in orbits],
           "pattern": list(cons.lemma_pattern(args.n)),
           "matches_pattern": orbits == [cons.lemma_pattern(args.n)]}
    _write(_json_dump(obj), args.out)
    return EXIT_OK


def cmd_probsearch(args) -> int:
    from . import probsearch as ps

    try:
        if args.action == "verify":
            params = ps.SearchParams(args.l, args.m, Fraction(args.p),
                                     args.s, args.t)
            report = ps.verify_params(params, precision=args.precision)
            _write(_json_dump(report.to_json_obj()), args.out)
            return EXIT_OK if report.suitable else EXIT_FAIL
        with open(args.grid_file) as fh:
            grid = ps.grid_from_json_obj(json.load(fh))
        found = ps.search(grid, budget=args.budget, precision=args.precision,
                          workers=args.workers)
        if found is None:
            _write(_json_dump({"found": None}), args.out)
            return EXIT_FAIL
        params, report = found
        _write(_json_dump({"found": report.to_json_obj()}), args.out)
        return EXIT_OK
    except ps.PrecisionError as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return EXIT_PRECISION


def cmd_oracle(args) -> int:
    from . import constructions as cons, graphs

    best, witnesses = cons.bruteforce_min_cliques(args.n, args.k, args.l)
    obj = {"n": args.n, "k": args.k, "l": args.l, "min": best,
           "witnesses": [graphs.canonical_graph6(g) for g in witnesses]}
    _write(_json_dump(obj), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    # Global flags are declared with SUPPRESS defaults on a shared parent so
    # they may appear before or after the subcommand; main() fills defaults.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS,
                        help="process workers for heavy builds "
                             "(output-invariant)")
    common.add_argument("--no-cache", action="store_true",
                        default=argparse.SUPPRESS,
                        help="disable the on-disk artifact cache")
    common.add_argument("--verbose", action="store_true",
                        default=argparse.SUPPRESS)
    ap = argparse.ArgumentParser(
        prog="flagforge",
        description="Exact flag-algebra toolkit for clique minimization "
                    "under independence-number constraints",
        parents=[common])
    subparsers = ap.add_subparsers(dest="command", required=True)

    def sub_parser(name, **kw):
        kw.setdefault("parents", []).append(common)
        return subparsers.add_parser(name, **kw)

    p = sub_parser("enumerate", help="admissible graphs or flags")
    p.add_argument("n", type=int)
    p.add_argument("l", type=int)
    p.add_argument("--flags", dest="flags_type", metavar="TYPE",
                   help="list flags of this type (dot, tau1, tau2, trivial, "
                        "or a graph6 type) instead of graphs")
    p.add_argument("--format", choices=["table", "json", "graph6"],
                   default="table")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_enumerate)

    p = sub_parser("density", help="induced or typed flag densities")
    p.add_argument("--host", required=True, help="graph6 host")
    p.add_argument("--target", required=True, help="graph6 pattern")
    p.add_argument("--target-labels",
                   help="1-indexed labeled vertices of the target, in label "
                        "order (makes this a flag density)")
    p.add_argument("--host-labels",
                   help="labeled vertices of the host (flag-in-flag density)")
    p.add_argument("--l", type=int, help="forbidden independent-set size "
                                         "for typed densities")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_density)

    p = sub_parser("product-table",
                       help="pairwise flag product densities as JSON")
    p.add_argument("--type", required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--flag-size", type=int, required=True)
    p.add_argument("--size", type=int, required=True,
                   help="output expansion size")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_product_table)

    p = sub_parser("build-sdp", help="emit SDPA file from a problem spec")
    p.add_argument("spec", help="JSON: {target, forbidden_l, t, blocks: "
                                "[{type, flag_size}]}")
    p.add_argument("--out", help="output .dat-s path")
    p.add_argument("--audit", help="also dump the exact problem as JSON")
    p.set_defaults(fn=cmd_build_sdp)

    p = sub_parser("verify-cert", help="verify a certificate file")
    p.add_argument("certificate")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_verify_cert)

    p = sub_parser("make-cert", help="write a bundled certificate JSON")
    p.add_argument("name")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_make_cert)

    p = sub_parser("construct", help="extremal construction tables")
    p.add_argument("what", choices=["c5", "turan"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--parts", type=int, default=3)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_construct)

    p = sub_parser("intopt", help="brute-force part-size optimization")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", default="1/5")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_intopt)

    p = sub_parser("probsearch",
                       help="certified counterexample conditions")
    psub = p.add_subparsers(dest="action", required=True)
    pv = psub.add_parser("verify", parents=[common])
    pv.add_argument("--l", type=int, required=True)
    pv.add_argument("--m", type=int, required=True)
    pv.add_argument("--p", required=True, help="rational, e.g. 51707/10000000")
    pv.add_argument("--s", type=int, required=True)
    pv.add_argument("--t", type=int, required=True)
    pv.add_argument("--precision", type=int, default=256)
    pv.add_argument("--out")
    pv.set_defaults(fn=cmd_probsearch, action="verify")
    pg = psub.add_parser("search", parents=[common])
    pg.add_argument("--grid-file", required=True)
    pg.add_argument("--budget", type=int)
    pg.add_argument("--precision", type=int, default=256)
    pg.add_argument("--out")
    pg.set_defaults(fn=cmd_probsearch, action="search")

    p = sub_parser("oracle", help="exhaustive minimum clique counts")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_oracle)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return EXIT_USAGE if exc.code not in (0,) else 0
    for name, default in (("workers", 1), ("no_cache", False),
                          ("verbose", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    from . import cache as cache_mod

    if args.no_cache:
        os.environ["FLAGFORGE_NO_CACHE"] = "1"
    elif not os.environ.get("FLAGFORGE_CACHE_DIR"):
        os.environ["FLAGFORGE_CACHE_DIR"] = cache_mod.default_dir()
    try:
        return args.fn(args)
    except BrokenPipeError:
        return EXIT_OK
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

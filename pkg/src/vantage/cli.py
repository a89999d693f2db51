"""Command-line front end.

Exit codes: 0 success/verified, 1 refuted/failed, 2 usage or parse error,
3 indeterminate (precision cap hit).  All randomness flows from --seed; the
report written to --out is byte-identical across runs for identical inputs,
seed and version (wall time goes to stderr only).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from vantage import __version__
from vantage.geometry import (
    CandidateSet,
    IndeterminateError,
    Point,
    TieError,
    VantageMultiset,
    multiset_from_json,
    multiset_to_json,
    pointset_from_json,
    pointset_to_json,
    rank,
)

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2
EXIT_INDETERMINATE = 3


class UsageError(Exception):
    pass


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read {path}: {e}")


def _load_pointset(path: str) -> CandidateSet:
    try:
        return pointset_from_json(_read_json(path))
    except (KeyError, ValueError) as e:
        raise UsageError(f"bad point set {path}: {e}")


def _load_multiset(path: str) -> VantageMultiset:
    try:
        return multiset_from_json(_read_json(path))
    except (KeyError, ValueError) as e:
        raise UsageError(f"bad multiset {path}: {e}")


def _parse_fraction(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"bad rational {s!r}: {e}")


def _parse_ordering(s: str):
    try:
        return tuple(int(t) for t in s.replace(" ", "").split(","))
    except ValueError as e:
        raise UsageError(f"bad ordering {s!r}: {e}")


def _parse_point(s: str) -> Point:
    return Point([_parse_fraction(t) for t in s.replace(" ", "").split(",")])


def _digest(payload) -> str:
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True, default=str).encode()).hexdigest()[:16]


def _emit(args, command: str, params: dict, results, inputs=None,
          rows=None, summary=None) -> None:
    """Write the report; `rows` feeds jsonl (one record per line) and
    `summary` feeds csv when catalogs are involved."""
    report = {
        "command": command,
        "version": __version__,
        "params": params,
        "inputs_digest": _digest(inputs if inputs is not None else params),
        "results": results,
    }
    fmt = getattr(args, "format", "json") or "json"
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    elif fmt == "jsonl":
        if rows is None:
            rows = results if isinstance(results, list) else [report]
        text = "".join(json.dumps(r, sort_keys=True, default=str) + "\n" for r in rows)
    elif fmt == "csv":
        table = summary if summary is not None else (
            results if isinstance(results, list) else [results])
        if not table:
            text = "\n"
        else:
            keys = sorted(table[0])
            lines = [",".join(keys)]
            for r in table:
                lines.append(",".join(str(r.get(k, "")) for k in keys))
            text = "\n".join(lines) + "\n"
    elif fmt == "svg":
        text = results  # pre-rendered
    else:
        raise UsageError(f"unknown format {fmt!r}")
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _witness_json(V: VantageMultiset) -> dict:
    return multiset_to_json(V)


def _catalog_records(catalog) -> list:
    from vantage.constructions import CheckConfig, HatConfig

    rows = []
    for ordering, witness in catalog.items():
        if isinstance(witness, VantageMultiset):
            w = {"kind": "multiset", **multiset_to_json(witness)}
        elif isinstance(witness, HatConfig):
            w = {"kind": "hat", "k": witness.k,
                 "u1": [str(c) for c in witness.u1],
                 "u2": [str(c) for c in witness.u2]}
        elif isinstance(witness, CheckConfig):
            w = {"kind": "check",
                 "v1": [str(c) for c in witness.v1],
                 "v2": [str(c) for c in witness.v2],
                 "x": str(witness.x), "y": str(witness.y)}
        else:
            w = {"kind": "other", "repr": repr(witness)}
        rows.append({"ordering": list(ordering), "witness": w})
    return rows


# -- subcommands ---------------------------------------------------------

def cmd_rank(args) -> int:
    C = _load_pointset(args.pointset)
    V = _load_multiset(args.multiset)
    try:
        ordering = rank(C, V, args.precision_cap)
    except TieError as e:
        _emit(args, "rank", {"precision_cap": args.precision_cap},
              {"tie": list(e.pair)},
              inputs=[pointset_to_json(C), multiset_to_json(V)])
        return EXIT_REFUTED
    except IndeterminateError as e:
        print(f"indeterminate: {e}", file=sys.stderr)
        return EXIT_INDETERMINATE
    _emit(args, "rank", {"precision_cap": args.precision_cap},
          {"ordering": list(ordering)},
          inputs=[pointset_to_json(C), multiset_to_json(V)])
    return EXIT_OK


def cmd_enum(args) -> int:
    from vantage.enumeration import enumerate_psi1_exact, enumerate_psi_k_d1_exact

    C = _load_pointset(args.pointset)
    if args.mode == "psi1":
        catalog = enumerate_psi1_exact(C)
    else:
        catalog = enumerate_psi_k_d1_exact(C, args.k)
    records = _catalog_records(catalog)
    _emit(args, f"enum {args.mode}", {"k": args.k},
          {"count": len(catalog), "orderings": records},
          inputs=pointset_to_json(C), rows=records,
          summary=[{"count": len(catalog)}])
    return EXIT_OK


def cmd_estimate(args) -> int:
    from vantage.enumeration import estimate_psi

    C = _load_pointset(args.pointset)
    res = estimate_psi(C, args.k, trials=args.trials, seed=args.seed)
    records = _catalog_records(res.catalog)
    summary = [{"count": len(res.catalog), "trials": res.trials,
                "ties_skipped": res.ties_skipped}]
    _emit(args, "estimate", {"k": args.k, "trials": args.trials, "seed": args.seed},
          {"count": len(res.catalog), "ties_skipped": res.ties_skipped,
           "trials": res.trials, "orderings": records},
          inputs=pointset_to_json(C), rows=records, summary=summary)
    return EXIT_OK


def cmd_bounds(args) -> int:
    from vantage import bounds

    rows = []
    if args.formula == "stirling":
        rows.append({"formula": "stirling_first_unsigned",
                     "params": f"n={args.a} r={args.b}",
                     "value": bounds.stirling_first_unsigned(args.a, args.b)})
    elif args.formula == "good-tideman":
        rows.append({"formula": "good_tideman_bound",
                     "params": f"n={args.a} d={args.b}",
                     "value": bounds.good_tideman_bound(args.a, args.b)})
    elif args.formula == "warren":
        rows.append({"formula": "warren_bound",
                     "params": f"N={args.a} m={args.b} delta={args.c}",
                     "value": bounds.warren_bound(args.a, args.b, args.c)})
    elif args.formula == "radical-warren":
        rows.append({"formula": "radical_warren_bound",
                     "params": f"N={args.a} m={args.b} delta={args.c} r={args.r} s={args.s}",
                     "value": bounds.radical_warren_bound(
                         args.a, args.b, args.c, args.r, args.s)})
    elif args.formula == "exponent":
        rows.append({"formula": "main_theorem_exponent",
                     "params": f"d={args.a} k={args.b}",
                     "value": bounds.main_theorem_exponent(args.a, args.b)})
    else:
        raise UsageError(f"unknown formula {args.formula}")
    _emit(args, f"bounds {args.formula}", {}, rows)
    return EXIT_OK


def cmd_construct(args) -> int:
    from vantage import constructions as cx

    if args.what == "d1-flank":
        R, C1, C2, catalog = cx.d1_flanking_catalog(args.k, args.m)
        results = {
            "R": str(R),
            "hat1": [[str(p[0])] for p in C1],
            "hat2": [[str(p[0])] for p in C2],
            "count": len(catalog),
            "orderings": _catalog_records(catalog),
        }
        _emit(args, "construct d1-flank", {"k": args.k, "m": args.m}, results)
        return EXIT_OK
    if args.what == "check-orderings":
        C = _load_pointset(args.pointset)
        v1 = _parse_point(args.v1)
        v2 = _parse_point(args.v2)
        good, cert = cx.is_good_pair(v1, v2, list(C.points))
        if not good:
            _emit(args, "construct check-orderings", {},
                  {"good": False, "sizes_full": cert.sizes_full,
                   "disjoint": cert.disjoint,
                   "violations": len(cert.crossing_violations)},
                  inputs=pointset_to_json(C))
            return EXIT_REFUTED
        catalog = cx.gen_check_orderings(list(C.points), v1, v2)
        gamma = cx.gamma_count(v1, v2, list(C.points))
        _emit(args, "construct check-orderings", {},
              {"good": True, "gamma": gamma, "count": len(catalog),
               "orderings": _catalog_records(catalog)},
              inputs=pointset_to_json(C))
        return EXIT_OK
    if args.what == "flanked":
        cfg = _read_json(args.config)
        core = pointset_from_json(cfg["core"]) if cfg.get("core") else None
        Vp = multiset_from_json(cfg["core_vantage"]) if cfg.get("core_vantage") else None
        hat1 = [Point([_parse_fraction(c) for c in row]) for row in cfg["hat1"]]
        hat2 = [Point([_parse_fraction(c) for c in row]) for row in cfg["hat2"]]
        k = Vp.size if Vp is not None else 0
        U = cx.HatConfig(k, Point([_parse_fraction(c) for c in cfg["u1"]]),
                         Point([_parse_fraction(c) for c in cfg["u2"]]))
        try:
            R, ordering = cx.compose_stabilized(core, Vp, hat1, hat2, U)
        except cx.StabilizationError as e:
            print(f"stabilization failed: {e}", file=sys.stderr)
            return EXIT_INDETERMINATE
        C = cx.build_flanked(core, hat1, hat2, R)
        V = cx.lift_vantage(Vp, U, R)
        _emit(args, "construct flanked", {},
              {"R": str(R), "ordering": list(ordering),
               "candidates": pointset_to_json(C), "vantage": multiset_to_json(V)},
              inputs=cfg)
        return EXIT_OK
    if args.what == "lower-bound":
        lb = cx.build_lower_bound_config(args.d, args.k, args.n, seed=args.seed)
        _emit(args, "construct lower-bound",
              {"d": args.d, "k": args.k, "n": args.n, "seed": args.seed},
              {"candidates": pointset_to_json(lb.C), "count": len(lb.catalog),
               "meta": {k: str(v) for k, v in lb.meta.items()},
               "orderings": _catalog_records(lb.catalog)})
        return EXIT_OK
    raise UsageError(f"unknown construct mode {args.what}")


def cmd_witness(args) -> int:
    from vantage import witnesses as wt

    C = _load_pointset(args.pointset)
    if args.what == "five-search":
        res = wt.five_point_search(C, trials=args.trials, seed=args.seed)
        _emit(args, "witness five-search",
              {"trials": args.trials, "seed": args.seed},
              {"protrusive": [list(o) for o in res["protrusive"]],
               "unwitnessed": [list(o) for o in res["unwitnessed"]],
               "found": len(res["found"])},
              inputs=pointset_to_json(C))
        return EXIT_OK
    ordering = _parse_ordering(args.ordering)
    try:
        if args.what == "d1":
            cert = wt.witness_d1(C, ordering)
        elif args.what == "distmatrix":
            cert = wt.witness_by_distance_matrix(C, ordering)
        elif args.what == "affine":
            cert = wt.witness_affine_independent(C, ordering)
        elif args.what == "four":
            cert = wt.witness_four_planar(C, ordering)
        else:
            raise UsageError(f"unknown witness mode {args.what}")
    except (wt.NonProtrusiveError, wt.NotApplicableError, wt.VerificationError,
            wt.CenterSearchError) as e:
        _emit(args, f"witness {args.what}", {"ordering": list(ordering)},
              {"verified": False, "reason": str(e)},
              inputs=pointset_to_json(C))
        return EXIT_REFUTED
    _emit(args, f"witness {args.what}", {"ordering": list(ordering)},
          {"verified": cert.verified,
           "ordering": list(cert.ordering),
           "vantage": _witness_json(cert.V),
           "margin_approx": cert.margin_float(),
           "margin_exact": repr(cert.margin)},
          inputs=pointset_to_json(C))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.what == "sixpoint":
        from vantage.witnesses import verify_six_point

        rep = verify_six_point(grid_step=_parse_fraction(args.grid_step),
                               far_threshold=_parse_fraction(args.far_threshold),
                               workers=args.workers)
        _emit(args, "verify sixpoint",
              {"grid_step": args.grid_step, "far_threshold": args.far_threshold},
              {"passed": rep.passed, "far_field_ok": rep.far_field_ok,
               "grid_ok": rep.grid_ok, "grid_points": rep.grid_points,
               "grid_min_lo": rep.grid_min_lo,
               "grid_min_cell": list(rep.grid_min_cell),
               "escalated_cells": rep.escalated_cells,
               "failed_cells": [list(c) for c in rep.failed_cells[:32]],
               "lipschitz_ok": rep.lipschitz_ok,
               "final_bound": rep.final_bound})
        return EXIT_OK if rep.passed else EXIT_REFUTED
    if args.what == "sign-family":
        from vantage.bounds import verify_sign_family

        failures: list = []
        ok = verify_sign_family(args.l, _parse_fraction(args.delta),
                                precision_cap=args.precision_cap,
                                failures=failures)
        _emit(args, "verify sign-family", {"l": args.l, "delta": args.delta},
              {"passed": ok, "checks": (2 ** args.l) * args.l,
               "failures": [[list(a), j, s] for a, j, s in failures[:32]]})
        return EXIT_OK if ok else EXIT_REFUTED
    if args.what == "galois":
        from vantage.bounds import galois_numeric_check, galois_product_expand

        exp = galois_product_expand(args.r, args.s)
        pts = [[Fraction(2 * i + 1, 2 * j + 3) for j in range(args.r)]
               for i in range(5)]
        err = galois_numeric_check(exp, pts)
        ok = exp.exponents_divisible and exp.coeffs_integral and err < 1e-30
        _emit(args, "verify galois", {"r": args.r, "s": args.s},
              {"passed": ok, "exponents_divisible": exp.exponents_divisible,
               "coeffs_integral": exp.coeffs_integral,
               "numeric_error": err,
               "monomials": {" ".join(map(str, e)): c
                             for e, c in sorted(exp.poly.items())}})
        return EXIT_OK if ok else EXIT_REFUTED
    raise UsageError(f"unknown verify mode {args.what}")


def cmd_plot(args) -> int:
    from vantage import plotting

    if args.what == "sixpoint":
        svg = plotting.plot_six_point()
    elif args.what == "arrangement":
        if not args.pointset:
            raise UsageError("plot arrangement needs a point set")
        C = _load_pointset(args.pointset)
        if C.dim != 2:
            raise UsageError("plot arrangement needs dim 2")
        svg = plotting.plot_arrangement(C)
    elif args.what == "flanked":
        cfg = _read_json(args.config) if args.config else None
        if not cfg:
            raise UsageError("plot flanked needs --config")
        core = [Point([_parse_fraction(c) for c in row]) for row in cfg["core"]]
        hat1 = [Point([_parse_fraction(c) for c in row]) for row in cfg["hat1"]]
        hat2 = [Point([_parse_fraction(c) for c in row]) for row in cfg["hat2"]]
        vant = [Point([_parse_fraction(c) for c in row])
                for row in cfg.get("vantage", [])]
        svg = plotting.plot_flanked(core, hat1, hat2, vant)
    else:
        raise UsageError(f"unknown plot mode {args.what}")
    args.format = "svg"
    _emit(args, f"plot {args.what}", {}, svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=10000)
    common.add_argument("--precision-cap", type=int, default=4096,
                        dest="precision_cap")
    common.add_argument("--format", choices=["json", "jsonl", "csv", "svg"],
                        default="json")
    common.add_argument("--out", default=None)

    p = argparse.ArgumentParser(
        prog="vantage",
        description="Exact vantage-point ordering computations")
    sub = p.add_subparsers(dest="cmd", required=True)

    def add_parser(name):
        return sub.add_parser(name, parents=[common])

    s = add_parser("rank")
    s.add_argument("pointset")
    s.add_argument("multiset")
    s.set_defaults(func=cmd_rank)

    s = add_parser("enum")
    s.add_argument("mode", choices=["psi1", "psik"])
    s.add_argument("pointset")
    s.add_argument("--k", type=int, default=1)
    s.set_defaults(func=cmd_enum)

    s = add_parser("estimate")
    s.add_argument("pointset")
    s.add_argument("--k", type=int, default=1)
    s.set_defaults(func=cmd_estimate)

    s = add_parser("bounds")
    s.add_argument("formula", choices=["stirling", "good-tideman", "warren",
                                       "radical-warren", "exponent"])
    s.add_argument("a", type=int)
    s.add_argument("b", type=int)
    s.add_argument("c", type=int, nargs="?", default=1)
    s.add_argument("--r", type=int, default=2)
    s.add_argument("--s", type=int, default=2)
    s.set_defaults(func=cmd_bounds)

    s = add_parser("construct")
    s.add_argument("what", choices=["d1-flank", "flanked", "check-orderings",
                                    "lower-bound"])
    s.add_argument("pointset", nargs="?")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--d", type=int, default=1)
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--v1", default=None)
    s.add_argument("--v2", default=None)
    s.add_argument("--config", default=None)
    s.set_defaults(func=cmd_construct)

    s = add_parser("witness")
    s.add_argument("what", choices=["d1", "distmatrix", "affine", "four",
                                    "five-search"])
    s.add_argument("pointset")
    s.add_argument("--ordering", default=None)
    s.set_defaults(func=cmd_witness)

    s = add_parser("verify")
    s.add_argument("what", choices=["sixpoint", "sign-family", "galois"])
    s.add_argument("--grid-step", default="1/50", dest="grid_step")
    s.add_argument("--far-threshold", default="5/2", dest="far_threshold")
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--l", type=int, default=8)
    s.add_argument("--delta", default="1/5")
    s.add_argument("--r", type=int, default=2)
    s.add_argument("--s", type=int, default=2)
    s.set_defaults(func=cmd_verify)

    s = add_parser("plot")
    s.add_argument("what", choices=["sixpoint", "arrangement", "flanked"])
    s.add_argument("pointset", nargs="?")
    s.add_argument("--config", default=None)
    s.set_defaults(func=cmd_plot)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    t0 = time.perf_counter()
    try:
        code = args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (TieError,) as e:
        print(f"tie: {e}", file=sys.stderr)
        return EXIT_REFUTED
    except IndeterminateError as e:
        print(f"indeterminate: {e}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    print(f"wall time: {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

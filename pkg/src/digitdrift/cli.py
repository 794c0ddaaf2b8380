"""Command-line entry point: ``digitdrift <command> ...``.

Exit codes: 0 success, 1 a check failed, 2 usage error.  JSON output is
wrapped in an envelope ``{command, parameters, results, artifact_version}``
and is byte-for-byte deterministic.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .digits import pattern_count_l, s2
from .distribution import mu, support_range, to_csv, to_json
from .exactnum import DyadicRational
from .prefixes import drift_counts, dump_tree, enumerate_prefixes, prefix_measure
from .spectral import (
    asymptotic_norm_bound,
    check_gauss_bound,
    check_phi_lemma,
    check_reduction_lemma,
    l2_norm_direct,
    l2_norm_quadrature,
)
from .variance import FAMILIES, per_position_bounds, ratio_scan, scan_csv, variance_bounds_check


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {v}")
    return v


def _pos_int(text: str) -> int:
    v = _nonneg_int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _envelope(command: str, parameters: dict, results) -> str:
    doc = {
        "command": command,
        "parameters": parameters,
        "results": results,
        "artifact_version": __version__,
    }
    return json.dumps(doc, indent=2) + "\n"


def _fraction_json(q) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator)}


# -- commands -------------------------------------------------------------------


def cmd_dist(args) -> int:
    dist = mu(args.a)
    lo = dist.D if args.min_d is None else min(args.min_d, dist.D)
    if args.format == "csv":
        out = to_csv(dist, args.decimal_digits, lo)
        if dist.tail:
            out += f"tail,D={dist.D},,mu(d) = mu(D)*2^(d-D) for d < D\n"
        sys.stdout.write(out)
        return 0
    rows = dist.expanded(lo)
    results = {
        "distribution": to_json(dist, args.a),
        "rows": [
            {"d": d, "value": rows[d].to_json(), "decimal": rows[d].to_decimal(args.decimal_digits)}
            for d in sorted(rows, reverse=True)
        ],
        "tail_rule": "mu(d) = mu(D)*2^(d-D) for d < D" if dist.tail else None,
    }
    params = {"a": args.a, "min_d": args.min_d, "format": args.format,
              "decimal_digits": args.decimal_digits}
    sys.stdout.write(_envelope("dist", params, results))
    return 0


def cmd_prefixes(args) -> int:
    ps = enumerate_prefixes(args.a, args.d)
    words = ps.as_strings()
    total = prefix_measure(ps)
    if args.format == "text":
        for w in words:
            print(w if w else "(empty)")
        print(f"# {len(words)} words, sum 2^-|p| = {total} = {total.to_decimal(12)}")
        return 0
    results = {"words": words, "count": len(words), "measure": total.to_json()}
    sys.stdout.write(_envelope("prefixes", {"a": args.a, "d": args.d}, results))
    return 0


def cmd_variance(args) -> int:
    report = variance_bounds_check(args.a)
    results = report.to_json()
    if args.a >= 1:
        pb = per_position_bounds(args.a)
        results["positions_ok"] = pb.ok
        results["closing"] = {
            "value": pb.closing_value.to_json(),
            "upper": pb.closing_upper.to_json(),
            "ok": pb.closing_ok,
            "le_one": pb.closing_le_one,
        }
    sys.stdout.write(_envelope("variance", {"a": args.a}, results))
    ok = report.proof_upper_ok and (report.l < 1 or report.lower_ok)
    if args.a >= 1:
        ok = ok and results["positions_ok"]
    return 0 if ok else 1


def cmd_norm(args) -> int:
    direct, sq = l2_norm_direct(mu(args.a))
    quad = l2_norm_quadrature(args.a, args.points)
    l = pattern_count_l(args.a)
    results = {
        "l": l,
        "direct": direct,
        "direct_squared": _fraction_json(sq),
        "quadrature": quad,
        "abs_diff": abs(direct - quad),
        "bound": None,
        "bound_ok": None,
    }
    ok = results["abs_diff"] <= 1e-8
    if l >= 2:
        b = asymptotic_norm_bound(l)
        results["bound"] = b
        results["bound_ok"] = direct <= b
        ok = ok and direct <= b
    sys.stdout.write(_envelope("norm", {"a": args.a, "points": args.points}, results))
    return 0 if ok else 1


def cmd_check_lemmas(args) -> int:
    reports = [
        check_phi_lemma(args.grid),
        check_reduction_lemma(args.kmax, args.grid),
        check_gauss_bound(args.gauss_grid),
    ]
    params = {"grid": args.grid, "kmax": args.kmax, "gauss_grid": args.gauss_grid}
    sys.stdout.write(_envelope("check-lemmas", params, [r.to_json() for r in reports]))
    return 0 if all(r.ok for r in reports) else 1


def cmd_scan(args) -> int:
    rows = ratio_scan(args.family, args.n_max, args.bit_budget)
    if args.format == "csv":
        text = scan_csv(rows)
    else:
        params = {"family": args.family, "n_max": args.n_max, "bit_budget": args.bit_budget}
        text = _envelope("scan", params, [r.to_json() for r in rows])
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    a, m = args.a, args.m
    if m < a.bit_length() + 2:
        raise argparse.ArgumentTypeError(f"--m must be >= bitlen(a) + 2 = {a.bit_length() + 2}")
    dist = mu(a)
    counts = drift_counts(a, m)
    tol = DyadicRational.pow2(-(m - a.bit_length() - 1))
    lo = args.min_d
    if lo is None:
        lo = support_range(dist, DyadicRational.pow2(-24)).start
    rows = []
    ok = True
    for d in range(dist.d_max + 1, lo - 1, -1):
        matrix = dist(d)
        prefix = prefix_measure(enumerate_prefixes(a, d))
        emp = DyadicRational(counts.get(d, 0), m)
        exact_ok = matrix == prefix
        emp_ok = abs(emp - matrix) <= tol
        ok = ok and exact_ok and emp_ok
        rows.append({
            "d": d,
            "matrix": matrix.to_json(),
            "prefix": prefix.to_json(),
            "empirical": emp.to_json(),
            "matrix_eq_prefix": exact_ok,
            "empirical_ok": emp_ok,
        })
    results = {"ok": ok, "tolerance": tol.to_json(), "s2_a": s2(a), "rows": rows}
    sys.stdout.write(_envelope("verify", {"a": a, "m": m, "min_d": lo}, results))
    return 0 if ok else 1


def cmd_tree(args) -> int:
    sys.stdout.write(dump_tree(args.a, args.depth))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="digitdrift", description="Exact law of s2(x+a) - s2(x).")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("dist", help="exact distribution mu_a")
    q.add_argument("a", type=_nonneg_int)
    q.add_argument("--min-d", type=int, default=None, help="expand the tail down to this d")
    q.add_argument("--format", choices=["json", "csv"], default="json")
    q.add_argument("--decimal-digits", type=_pos_int, default=12)
    q.set_defaults(func=cmd_dist)

    q = sub.add_parser("prefixes", help="prefix set P_{a,d}, LSB-first")
    q.add_argument("a", type=_nonneg_int)
    q.add_argument("d", type=int)
    q.add_argument("--format", choices=["text", "json"], default="text")
    q.set_defaults(func=cmd_prefixes)

    q = sub.add_parser("variance", help="exact -2V(a) and its bounds")
    q.add_argument("a", type=_nonneg_int)
    q.set_defaults(func=cmd_variance)

    q = sub.add_parser("norm", help="l2 norm, direct and by quadrature")
    q.add_argument("a", type=_nonneg_int)
    q.add_argument("--points", type=int, default=4096)
    q.set_defaults(func=cmd_norm)

    q = sub.add_parser("check-lemmas", help="grid checks of the matrix-norm inequalities")
    q.add_argument("--grid", type=_pos_int, default=4096)
    q.add_argument("--kmax", type=_pos_int, default=32)
    q.add_argument("--gauss-grid", type=_pos_int, default=100_000)
    q.set_defaults(func=cmd_check_lemmas)

    q = sub.add_parser("scan", help="-2V/l along a family of integers")
    q.add_argument("--family", choices=sorted(FAMILIES), required=True)
    q.add_argument("--n-max", type=_nonneg_int, required=True)
    q.add_argument("--out", default=None)
    q.add_argument("--format", choices=["csv", "json"], default="csv")
    q.add_argument("--bit-budget", type=_pos_int, default=10 ** 6)
    q.set_defaults(func=cmd_scan)

    q = sub.add_parser("verify", help="matrix vs prefix vs brute-force agreement")
    q.add_argument("a", type=_nonneg_int)
    q.add_argument("--m", type=_pos_int, default=None, help="enumerate x < 2^m")
    q.add_argument("--min-d", type=int, default=None)
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("tree", help="text dump of the summation tree")
    q.add_argument("a", type=_nonneg_int)
    q.add_argument("--depth", type=_pos_int, default=3)
    q.set_defaults(func=cmd_tree)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "m", "unset") is None:
        args.m = args.a.bit_length() + 14
    try:
        return args.func(args)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        print(f"digitdrift: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

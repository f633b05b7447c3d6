"""Command-line entry point: ``qschur <subcommand> ...``.

Reports are JSON on stdout (or ``--output``); the exit code is 0 exactly when
every check in the report passes.  ``QSCHUR_CACHE_DIR`` enables an on-disk
cache of computed canonical bases.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from qschur import __version__
from qschur.fqlinalg import SUPPORTED_PRIMES

log = logging.getLogger("qschur")

MAX_N, MAX_D, MAX_ORACLE_D = 3, 4, 3


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _primes(text: str) -> list[int]:
    ps = _int_list(text)
    bad = [p for p in ps if p not in SUPPORTED_PRIMES]
    if bad or not ps:
        raise argparse.ArgumentTypeError(f"primes must come from {SUPPORTED_PRIMES}")
    return ps


def _cap(args, n: int | None, d: int | None, max_d: int = MAX_D):
    if args.unsafe_large:
        return
    if n is not None and n > MAX_N:
        raise SystemExit(f"error: n={n} exceeds the cap {MAX_N} (use --unsafe-large to override)")
    if d is not None and d > max_d:
        raise SystemExit(f"error: d={d} exceeds the cap {max_d} (use --unsafe-large to override)")


# output

def _tsv(report) -> str:
    rows = None
    for key in ("elements", "labels", "constants", "checks", "results"):
        if isinstance(report, dict) and isinstance(report.get(key), list) and report[key]:
            rows = report[key]
            break
    lines = []
    if rows is None:
        for k, v in report.items():
            lines.append(f"{k}\t{json.dumps(v, sort_keys=True)}")
    else:
        cols = list(rows[0].keys())
        lines.append("\t".join(cols))
        for r in rows:
            lines.append("\t".join(json.dumps(r.get(c), sort_keys=True) for c in cols))
        if "pass" in report:
            lines.append(f"# pass\t{json.dumps(report['pass'])}")
    return "\n".join(lines) + "\n"


def _emit(args, report):
    text = json.dumps(report, sort_keys=True, indent=1) + "\n" if args.format == "json" else _tsv(report)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _verdict(report) -> int:
    ok = bool(report.get("pass", True))
    if not ok:
        failing = report.get("failing_clauses") or report.get("failing") or []
        print("FAIL" + (": " + ", ".join(failing) if failing else ""), file=sys.stderr)
    return 0 if ok else 1


# commands

def _cached_basis(n: int, d: int):
    from qschur.schur import CanonicalBasis, canonical_basis

    cache = os.environ.get("QSCHUR_CACHE_DIR")
    path = Path(cache) / f"basis_n{n}_d{d}.json" if cache else None
    if path is not None and path.exists():
        log.info("reading cached basis %s", path)
        return CanonicalBasis.from_json(json.loads(path.read_text(encoding="utf-8")))
    cb = canonical_basis(n, d, cap=10 ** 9)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(cb.to_json(), sort_keys=True), encoding="utf-8")
    return cb


def cmd_basis(args) -> int:
    _cap(args, args.n, args.d)
    cb = _cached_basis(args.n, args.d)
    data = cb.to_json()
    if args.format == "tsv":
        lines = ["top\tmatrix\tcoeff"]
        for e in data["elements"]:
            for t in e["expansion"]:
                lines.append(f"{json.dumps(e['top'])}\t{json.dumps(t['matrix'])}\t{json.dumps(t['coeff'])}")
        text = "\n".join(lines) + "\n"
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    else:
        _emit(args, data)
    return 0


def cmd_verify_theorem_a(args) -> int:
    from qschur.schur import CanonicalBasis
    from qschur.udot import verify_theorem_A

    if args.n not in (2, 3) and not args.unsafe_large:
        raise SystemExit("error: verify-theorem-a supports n in {2, 3}")
    _cap(args, args.n, args.d_max)
    override = None
    if args.basis_file:
        override = {}
        for path in args.basis_file:
            cb = CanonicalBasis.from_json(json.loads(Path(path).read_text(encoding="utf-8")))
            if cb.n != args.n:
                raise SystemExit(f"error: basis file {path} is for n={cb.n}")
            override[cb.d] = cb
    report = verify_theorem_A(args.n, args.d_max, args.shift_window, basis_override=override)
    _emit(args, report)
    return _verdict(report)


def cmd_oracle_check(args) -> int:
    from qschur.oracle import check_schur_relations_numeric, oracle_check

    _cap(args, args.n, args.d, MAX_ORACLE_D)
    report = oracle_check(args.n, args.d, tuple(args.primes))
    if args.relations:
        rel = [check_schur_relations_numeric(args.n, args.d, p) for p in args.primes]
        report["relations"] = rel
        report["pass"] = report["pass"] and all(r["pass"] for r in rel)
    _emit(args, report)
    return _verdict(report)


def cmd_cohomology_check(args) -> int:
    from qschur.cohomology import cohomology_report

    mu = args.mu
    if any(x < 0 for x in mu):
        raise SystemExit("error: block sizes must be non-negative")
    _cap(args, len(mu), sum(mu))
    if args.char not in (0,) + SUPPORTED_PRIMES:
        raise SystemExit(f"error: characteristic must be 0 or one of {SUPPORTED_PRIMES}")
    report = cohomology_report(mu, args.char)
    # fullness is only guaranteed in characteristic 0; in char p a proper image is reported, not failed
    if args.char == 0:
        report["checks"]["bubble_image_full"] = report["bubble_image"]["full"]
    report["pass"] = all(report["checks"].values())
    report["failing"] = sorted(k for k, v in report["checks"].items() if not v)
    _emit(args, report)
    return _verdict(report)


def cmd_eq1_check(args) -> int:
    from qschur.laurent import eval_at
    from qschur.schur import dims_of
    from qschur.udot import eq1_check, eq1_positions, normal_form_weights

    _cap(args, None, args.d)
    results = []
    weights = [tuple(args.mu)] if args.mu else normal_form_weights(args.d)
    for mu in weights:
        d = sum(mu)
        dims = dims_of(mu, d)
        if dims is None:
            raise SystemExit(f"error: weight {mu} is not admissible")
        for j in eq1_positions(dims):
            if j >= len(mu):
                continue
            row = {"weight": list(mu), "j": j, "block": mu[j]}
            try:
                m = eq1_check(dims, j)
                row.update({"m": m.to_pairs(), "m_at_1": int(eval_at(m, 1)), "pass": True})
            except (AssertionError, ValueError) as exc:
                row.update({"error": str(exc), "pass": False})
            results.append(row)
    report = {"d": args.d, "results": results, "pass": all(r["pass"] for r in results)}
    _emit(args, report)
    return _verdict(report)


def cmd_surjectivity_check(args) -> int:
    from qschur.udot import surjectivity_check

    _cap(args, args.n, args.d, MAX_ORACLE_D)
    report = surjectivity_check(args.n, args.d)
    _emit(args, report)
    return _verdict(report)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qschur", description="q-Schur algebras, canonical bases and flag-count oracles")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "tsv"], default="json")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--verbose", "-v", action="count", default=0)
    common.add_argument("--unsafe-large", action="store_true", help="lift the feasibility caps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", parents=[common], help="canonical basis of S(d, n) as JSON")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--d", type=_nonneg, required=True)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("verify-theorem-a", parents=[common], help="certify the projection of canonical bases")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--d-max", type=_nonneg, required=True)
    p.add_argument("--shift-window", type=_positive, default=3,
                   help="consecutive shifts that must agree before a label counts as stable")
    p.add_argument("--basis-file", action="append", help="use this canonical-basis JSON instead of recomputing")
    p.set_defaults(func=cmd_verify_theorem_a)

    p = sub.add_parser("oracle-check", parents=[common], help="generator actions against flag counts over F_p")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--d", type=_nonneg, required=True)
    p.add_argument("--primes", type=_primes, default=[2, 3, 5])
    p.add_argument("--relations", action="store_true", help="also check relations inside the function algebra")
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("cohomology-check", parents=[common], help="Chern-class identities in R_mu")
    p.add_argument("--mu", type=_int_list, required=True, help="block sizes, e.g. 1,1")
    p.add_argument("--char", type=_nonneg, default=0)
    p.set_defaults(func=cmd_cohomology_check)

    p = sub.add_parser("eq1-check", parents=[common], help="translation-off-and-back scalars")
    p.add_argument("--d", type=_nonneg, default=3)
    p.add_argument("--mu", type=_int_list, help="a single normal-form weight instead of all of level d")
    p.set_defaults(func=cmd_eq1_check)

    p = sub.add_parser("surjectivity-check", parents=[common], help="monomials against the orbit basis")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--d", type=_nonneg, required=True)
    p.set_defaults(func=cmd_surjectivity_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

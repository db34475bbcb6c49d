"""Command-line front end.

Exit codes: 0 success/agreement, 1 verification failure, 2 usage error,
3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Sequence

from . import certificates as certs
from .errors import CertificateParseError, NoClosedForm, ResourceLimitError, SearchLimitExceeded, UsageError
from .formulas import THEOREM_FORMULAS, chain_power_ndepth, closed_form, upper_bound
from .lattice import WeightVector
from .oracle import derive_formula, grid_mismatch, unreduced_formula
from .solver import DEFAULT_NODE_LIMIT, exact_ndepth, sorted_grid, sweep

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
SWEEP_MAX_INSTANCES = 100_000


def _default_threads() -> int:
    raw = os.environ.get("NDEPTH_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    @property
    def records(self) -> bool:
        return self.fmt == "records"

    def record(self, **fields) -> None:
        if self.records:
            print(json.dumps(fields, sort_keys=True), file=self.stream)

    def say(self, text: str = "") -> None:
        if not self.records:
            print(text, file=self.stream)


def _weights_from(args) -> WeightVector:
    if args.chain and args.weights:
        raise UsageError("give either weights or --chain N K, not both")
    if args.chain:
        n, k = args.chain
        if n < 2:
            raise UsageError(f"chain length n must be >= 2, got {n}")
        return WeightVector((n - 1,) * k)
    if not args.weights:
        raise UsageError("no weights given")
    return WeightVector(tuple(args.weights))


def cmd_solve(args, out: Output) -> int:
    w = _weights_from(args)
    bound = upper_bound(w)
    try:
        cf = closed_form(w)
    except NoClosedForm:
        cf = None
    try:
        result = exact_ndepth(w, node_limit=args.node_limit, workers=args.threads)
    except SearchLimitExceeded as exc:
        out.record(kind="solve", status="resource-exhausted", weights=list(w), bound=bound,
                   closed_form=cf, nodes=exc.nodes, value_at_most=exc.threshold)
        out.say(f"resource exhausted after {exc.nodes} nodes while probing threshold {exc.threshold}")
        out.say(f"ndepth <= {exc.threshold} (every larger threshold was refuted)")
        return EXIT_RESOURCE
    witness = [str(iv) for iv in result.witness]
    fields = dict(kind="solve", status="ok", weights=list(w), value=result.value, bound=bound,
                  closed_form=cf, witness=witness, nodes=result.nodes,
                  probes=[[t, ok, n] for t, ok, n in result.probes])
    if not args.deterministic_witness:
        fields["elapsed_s"] = round(result.elapsed, 6)
    out.record(**fields)
    out.say(f"weights      {w}")
    out.say(f"ndepth       {result.value}")
    out.say(f"upper bound  {bound}")
    out.say(f"closed form  {cf if cf is not None else 'n/a (k > 5)'}")
    out.say(f"witness      {','.join(witness)}")
    out.say(f"search       {result.nodes} nodes, {result.elapsed:.3f}s")
    return EXIT_OK


def cmd_bound(args, out: Output) -> int:
    w = _weights_from(args)
    value = upper_bound(w)
    out.record(kind="bound", weights=list(w), bound=value)
    out.say(str(value))
    return EXIT_OK


def cmd_formula(args, out: Output) -> int:
    if args.chain and not args.weights:
        n, k = args.chain
        value = chain_power_ndepth(n, k)
        out.record(kind="formula", chain=[n, k], value=value)
        out.say(str(value))
        return EXIT_OK
    w = _weights_from(args)
    try:
        value = closed_form(w)
    except NoClosedForm as exc:
        out.record(kind="formula", weights=list(w), error=str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.record(kind="formula", weights=list(w), value=value, formula=str(THEOREM_FORMULAS[w.k]))
    out.say(str(value))
    return EXIT_OK


def _report_fields(report: certs.CertificateReport, source: str) -> dict:
    return dict(kind="certificate", name=report.name, source=source, structure_ok=report.structure_ok,
                claim_verified=report.claim_verified, status=report.status, details=report.details)


def cmd_certify(args, out: Output) -> int:
    if not args.paper_corpus and not args.paths:
        raise UsageError("give certificate paths or --paper-corpus")
    entries = []  # (report | None, source, parse error)
    if args.paper_corpus:
        entries += [(certs.check_certificate(c), "paper", None) for c in certs.paper_corpus()]
    variants = certs.erratum_corpus() if args.paper_corpus else []
    for path in args.paths:
        try:
            c = certs.load_certificate(path)
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        except CertificateParseError as exc:
            entries.append((None, path, str(exc)))
            continue
        entries.append((certs.check_certificate(c), path, None))

    failed = False
    counts = {"structure": 0, "verified": 0, "discrepancy": 0, "failed": 0}
    for report, source, error in entries:
        if report is None:
            failed = True
            counts["failed"] += 1
            out.record(kind="certificate", source=source, status="parse-error", details=[error])
            out.say(f"{source}: parse error: {error}")
            continue
        counts["structure"] += report.structure_ok
        counts["verified"] += report.claim_verified
        out.record(**_report_fields(report, source))
        ok = report.status == "verified"
        if report.status == "documented-discrepancy":
            counts["discrepancy"] += 1
            ok = args.allow_errata
        elif not ok:
            counts["failed"] += 1
        failed |= not ok
        out.say(f"{report.name:<22} structure={'ok' if report.structure_ok else 'INVALID'} "
                f"claim={'verified' if report.claim_verified else 'NOT verified'}  [{report.status}]")
        for line in report.details:
            out.say(f"    {line}")
        if report.erratum and report.status != "verified":
            out.say(f"    erratum: {report.erratum}")

    for c in variants:
        report = certs.check_certificate(c)
        out.record(**_report_fields(report, "erratum-variant"))
        out.say(f"{report.name:<22} (erratum variant) [{report.status}]")
        failed |= report.status != "verified"

    out.record(kind="certify-summary", checked=len(entries), structure_ok=counts["structure"],
               claims_verified=counts["verified"], documented_discrepancies=counts["discrepancy"],
               failures=counts["failed"], erratum_variants_verified=sum(
                   certs.check_certificate(c).status == "verified" for c in variants))
    out.say(f"{len(entries)} checked: {counts['structure']} structurally valid, "
            f"{counts['verified']} claims verified, {counts['discrepancy']} documented discrepancies, "
            f"{counts['failed']} failures")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_derive(args, out: Output) -> int:
    k = args.k
    try:
        formula = derive_formula(k)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        out.record(kind="derive", k=k, error=str(exc))
        return EXIT_RESOURCE
    raw = unreduced_formula(k)
    grid = args.grid_max
    points = sum(1 for _ in sorted_grid(k, grid))
    vs_raw = grid_mismatch(formula.evaluate, raw.evaluate, k, grid)
    vs_exact = grid_mismatch(formula.evaluate, lambda w: exact_ndepth(w, node_limit=args.node_limit).value, k, grid)
    vs_known = grid_mismatch(formula.evaluate, THEOREM_FORMULAS[k].evaluate, k, grid)
    ok = vs_raw is None and vs_exact is None and vs_known is None
    out.record(kind="derive", k=k, formula=str(formula), unreduced_terms=len(raw.terms),
               grid_max=grid, grid_points=points,
               mismatch_unreduced=vs_raw, mismatch_exact=vs_exact, mismatch_known=vs_known)
    out.say(str(formula))
    out.say(f"reduced from {len(raw.terms)} distinct min-terms")
    for label, where in (("unreduced formula", vs_raw), ("exact solver", vs_exact), ("known closed form", vs_known)):
        status = "agrees" if where is None else f"DIFFERS at {where}"
        out.say(f"grid check vs {label} ({points} sorted points, entries 1..{grid}): {status}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sweep(args, out: Output) -> int:
    k, max_entry = args.k, args.max_entry
    if not 1 <= k <= 5:
        raise UsageError(f"sweep needs 1 <= k <= 5 (closed forms exist only there), got {k}")
    vectors = list(sorted_grid(k, max_entry))
    if len(vectors) > args.max_instances:
        print(f"error: grid has {len(vectors)} instances, budget is {args.max_instances}", file=sys.stderr)
        return EXIT_RESOURCE
    disagreements = 0
    start = time.perf_counter()
    try:
        for row in sweep(vectors, node_limit=args.node_limit, workers=args.threads):
            disagreements += not row.agree
            out.record(kind="sweep-row", weights=list(row.weights), exact=row.exact,
                       closed_form=row.closed_form, bound=row.bound, agree=row.agree)
            out.say(f"{str(row.weights):<22} exact={row.exact:<4} closed={row.closed_form:<4} "
                    f"bound={row.bound:<4} {'ok' if row.agree else 'DISAGREE'}")
    except SearchLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    out.record(kind="sweep-summary", k=k, max_entry=max_entry, instances=len(vectors),
               disagreements=disagreements)
    out.say(f"{len(vectors)} instances, {disagreements} disagreements "
            f"({time.perf_counter() - start:.2f}s)")
    return EXIT_FAIL if disagreements else EXIT_OK


def cmd_selftest(args, out: Output) -> int:
    checks = []

    def check(name, fn):
        try:
            ok = bool(fn())
        except Exception as exc:  # noqa: BLE001 - reported, not hidden
            ok = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        checks.append(ok)
        out.record(kind="selftest", check=name, passed=ok)
        out.say(f"{'PASS' if ok else 'FAIL'}  {name}")

    check("closed form matches exact search, k<=4, entries 1..3",
          lambda: all(r.agree for k in range(1, 5) for r in sweep(sorted_grid(k, 3))))
    check("closed form matches exact search, k=5, entries 1..2",
          lambda: all(r.agree for r in sweep(sorted_grid(5, 2))))
    check("boolean lattice values ceil(k/2), k<=5",
          lambda: all(exact_ndepth((1,) * k).value == (k + 1) // 2 for k in range(1, 6)))
    check("derived k=3 formula equals the known one",
          lambda: str(derive_formula(3)) == "max( min(<3>), min(<12>) )")
    check("corpus claims verify (errata documented)",
          lambda: all(certs.check_certificate(c).status in ("verified", "documented-discrepancy")
                      for c in certs.paper_corpus())
          and all(certs.check_certificate(c).status == "verified" for c in certs.erratum_corpus()))
    return EXIT_OK if all(checks) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "records"), default="human",
                        help="records = one JSON object per line")
    common.add_argument("--node-limit", type=_positive, default=DEFAULT_NODE_LIMIT)
    common.add_argument("--threads", type=_positive, default=_default_threads(),
                        help="worker processes (default: $NDEPTH_THREADS or 1)")
    common.add_argument("--deterministic-witness", action="store_true",
                        help="omit timings so identical inputs give identical output")
    common.add_argument("--grid-max", type=_positive, default=4,
                        help="largest weight entry in grid equivalence checks")

    parser = argparse.ArgumentParser(prog="ndepth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def weights_cmd(name, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("weights", nargs="*", type=_positive, metavar="N")
        p.add_argument("--chain", nargs=2, type=_positive, metavar=("N", "K"),
                       help="the product of K chains of length N (weights N-1)")
        return p

    weights_cmd("solve", "exact ndepth with a witness partition").set_defaults(func=cmd_solve)
    weights_cmd("bound", "upper bound max(<1..k-1>, <k>)").set_defaults(func=cmd_bound)
    weights_cmd("formula", "closed-form ndepth for k <= 5").set_defaults(func=cmd_formula)

    p = sub.add_parser("certify", parents=[common], help="check partition certificates")
    p.add_argument("paths", nargs="*")
    p.add_argument("--paper-corpus", action="store_true")
    p.add_argument("--allow-errata", action="store_true",
                   help="documented discrepancies do not fail the run")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("derive", parents=[common], help="derive the max-min formula for k <= 4")
    p.add_argument("k", type=int)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("sweep", parents=[common], help="exact search vs closed form over a grid")
    p.add_argument("k", type=int)
    p.add_argument("max_entry", type=_positive)
    p.add_argument("--max-instances", type=_positive, default=SWEEP_MAX_INSTANCES)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selftest", parents=[common], help="quick end-to-end checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.format)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())

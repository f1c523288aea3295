"""Command-line interface: ingestion, batch reports, and search harnesses.

Input is line-delimited JSON records {label, poly, basis?, splitting?,
galois?} with polynomial coefficients constant-term-first.  Output is
line-delimited JSON report objects on stdout; progress goes to stderr.

Exit codes: 0 success, 1 usage, 2 parse/validation, 3 tameness or
unsupported splitting, 4 no applicable criterion, 5 invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .cubicsearch import enumerate_cubic_fields, equal_disc_groups
from .decide import (
    cubic_same_spinor_genus,
    galois_same_spinor_genus,
    isometric_by_parity,
    isometric_fundamental_disc,
    isometric_trace_forms,
    same_spinor_genus,
    single_odd_prime_isometric,
)
from .errors import (
    ConsistencyError,
    DuplicateLabelError,
    HypothesisError,
    LimitError,
    ParseError,
    TamenessError,
    TraceFormsError,
    UnsupportedSplittingError,
)
from .numberfield import (
    FieldRecord,
    field_from_record,
    ramification_profile,
    splitting_data,
    trace_gram,
)
from .padic import legendre_symbol
from .quadform import (
    canonical_two_adic_symbol,
    diagonal_local_symbol_odd,
    genus_equal,
    genus_symbol,
    isometry_witness_search,
    local_symbol_odd,
    pairwise_witnesses,
    signature,
)
from .raminv import (
    first_ramification_factor,
    local_trace_model,
    nonresidue_odd_count,
    second_ramification_factor,
    tame_diagonal_form,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_TAME = 3
EXIT_NO_CRITERION = 4
EXIT_INVARIANT = 5

MAX_CUBIC_SEARCH = 200_000

DECISION_PROCEDURES = (
    ("isometric_trace_forms", isometric_trace_forms),
    ("same_spinor_genus", same_spinor_genus),
    ("isometric_by_parity", isometric_by_parity),
    ("isometric_fundamental_disc", isometric_fundamental_disc),
    ("single_odd_prime_isometric", single_odd_prime_isometric),
    ("galois_same_spinor_genus", galois_same_spinor_genus),
    ("cubic_same_spinor_genus", cubic_same_spinor_genus),
)


def _emit(obj, out):
    out.write(json.dumps(obj, separators=(",", ":")) + "\n")


def _parse_rational(value, line):
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad rational {value!r}", line)
    raise ParseError(f"bad rational {value!r}", line)


_ALLOWED_KEYS = {"label", "poly", "basis", "splitting", "galois"}


def parse_record(obj, line=None) -> FieldRecord:
    if not isinstance(obj, dict):
        raise ParseError("record must be an object", line)
    unknown = set(obj) - _ALLOWED_KEYS
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}", line)
    label = obj.get("label")
    if not isinstance(label, str) or not label:
        raise ParseError("record needs a nonempty string label", line)
    poly = obj.get("poly")
    if (
        not isinstance(poly, list)
        or len(poly) < 2
        or any(not isinstance(c, int) or isinstance(c, bool) for c in poly)
    ):
        raise ParseError("poly must be a list of integers", line)
    basis = obj.get("basis")
    if basis is not None:
        if not isinstance(basis, list) or any(not isinstance(r, list) for r in basis):
            raise ParseError("basis must be a matrix", line)
        basis = tuple(
            tuple(_parse_rational(x, line) for x in row) for row in basis
        )
    splitting = obj.get("splitting")
    if splitting is not None:
        if not isinstance(splitting, dict):
            raise ParseError("splitting must be an object", line)
        parsed = {}
        for key, pairs in splitting.items():
            try:
                p = int(key)
            except ValueError:
                raise ParseError(f"bad splitting prime {key!r}", line)
            if not isinstance(pairs, list) or not all(
                isinstance(ef, list) and len(ef) == 2 for ef in pairs
            ):
                raise ParseError(f"bad splitting pairs at {key}", line)
            parsed[p] = [(int(e), int(f)) for e, f in pairs]
        splitting = parsed
    galois = obj.get("galois")
    if galois is not None and not isinstance(galois, bool):
        raise ParseError("galois must be a boolean", line)
    return FieldRecord(
        label=label, poly=tuple(poly), basis=basis, splitting=splitting,
        galois=galois,
    )


def ingest(path) -> list[FieldRecord]:
    """Parse a line-delimited record file; duplicate labels are rejected."""
    records = []
    seen = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", lineno)
            rec = parse_record(obj, lineno)
            if rec.label in seen:
                raise DuplicateLabelError(f"duplicate label {rec.label!r}", lineno)
            seen.add(rec.label)
            records.append(rec)
    return records


def _build_fields(records):
    fields = {}
    for rec in records:
        fields[rec.label] = field_from_record(rec)
    return fields


def _field_report(fld):
    report = {
        "type": "field",
        "label": fld.label,
        "degree": fld.n,
        "poly": list(fld.poly),
        "disc": fld.disc,
        "signature": list(fld.sig),
    }
    profile, tame = ramification_profile(fld)
    report["tame"] = tame
    splitting = {}
    invariants = {}
    for p in sorted(profile):
        sd = profile[p]
        splitting[str(p)] = [list(pair) for pair in sd.pairs]
        if not sd.tame:
            invariants[str(p)] = {"wild": True}
        elif p != 2:
            alpha = first_ramification_factor(sd)
            beta = second_ramification_factor(sd, fld.n)
            invariants[str(p)] = {
                "first_factor": alpha,
                "second_factor": str(beta),
                "nonresidue_count": nonresidue_odd_count(sd),
                "legendre_first": legendre_symbol(alpha, p),
            }
    report["splitting"] = splitting
    report["invariants"] = invariants
    return report


def cmd_invariants(records, out) -> int:
    fields = _build_fields(records)
    for label in fields:
        _emit(_field_report(fields[label]), out)
    return EXIT_OK


def _run_procedures(fa, fb, out):
    verdicts = 0
    reasons = []
    for name, proc in DECISION_PROCEDURES:
        try:
            verdict = proc(fa, fb)
        except (HypothesisError, UnsupportedSplittingError) as exc:
            reasons.append(exc)
            _emit(
                {
                    "type": "skip",
                    "a": fa.label,
                    "b": fb.label,
                    "procedure": name,
                    "reason": str(exc),
                },
                out,
            )
            continue
        verdicts += 1
        report = {"type": "verdict", "a": fa.label, "b": fb.label,
                  "procedure": name}
        report.update(verdict.as_dict())
        _emit(report, out)
    return verdicts, reasons


def _skip_exit_code(reasons) -> int:
    if any(isinstance(r, (TamenessError, UnsupportedSplittingError)) for r in reasons):
        return EXIT_TAME
    return EXIT_NO_CRITERION


def cmd_compare(records, label_a, label_b, oracle=False, witness_bound=None,
                out=None) -> int:
    fields = _build_fields(records)
    for label in (label_a, label_b):
        if label not in fields:
            raise ParseError(f"unknown label {label!r}")
    fa, fb = fields[label_a], fields[label_b]
    verdicts, reasons = _run_procedures(fa, fb, out)
    if oracle or witness_bound:
        ga, gb = trace_gram(fa), trace_gram(fb)
        if oracle:
            _emit(
                {
                    "type": "oracle",
                    "a": fa.label,
                    "b": fb.label,
                    "genus_equal": genus_equal(ga, gb),
                    "genus_symbols": [
                        genus_symbol(ga).as_dict(),
                        genus_symbol(gb).as_dict(),
                    ],
                },
                out,
            )
        if witness_bound:
            witness = None
            for bound in range(1, witness_bound + 1):
                witness = isometry_witness_search(ga, gb, bound)
                if witness is not None:
                    break
            _emit(
                {
                    "type": "witness",
                    "a": fa.label,
                    "b": fb.label,
                    "bound": witness_bound,
                    "matrix": witness,
                },
                out,
            )
    if verdicts == 0:
        return _skip_exit_code(reasons)
    return EXIT_OK


def _cubic_group_reports(group, witness_bound, out):
    fields = [
        field_from_record(FieldRecord(label=f"x^3{c.a:+d}x{c.b:+d}", poly=c.poly))
        for c in group
    ]
    grams = [trace_gram(f) for f in fields]
    witnesses = {}
    if witness_bound and group[0].disc < 0:
        witnesses = pairwise_witnesses(grams, witness_bound)
    count = 0
    for i in range(len(group)):
        for j in range(i + 1, len(group)):
            c1, c2 = group[i], group[j]
            report = {
                "type": "cubic-pair",
                "disc": c1.disc,
                "polys": [list(c1.poly), list(c2.poly)],
            }
            if c1.disc < 0:
                report["isometric"] = isometric_trace_forms(
                    fields[i], fields[j]
                ).answer
            report["same_spinor_genus"] = cubic_same_spinor_genus(
                fields[i], fields[j]
            ).answer
            report["genus_equal"] = genus_equal(grams[i], grams[j])
            report["witness"] = witnesses.get((i, j))
            _emit(report, out)
            count += 1
    return count


def cmd_scan(records, out, group_by_disc=False, cubic_search=None,
             witness_bound=8, progress=None) -> int:
    fields = _build_fields(records)
    groups = {}
    for label, fld in fields.items():
        key = (fld.n, fld.disc) if group_by_disc else (fld.n, fld.disc, fld.sig)
        groups.setdefault(key, []).append(label)
    for key in sorted(groups, key=str):
        labels = groups[key]
        if len(labels) < 2:
            continue
        _emit({"type": "group", "degree": key[0], "disc": key[1],
               "labels": labels}, out)
        for i in range(len(labels)):
            for j in range(i + 1, len(labels)):
                _run_procedures(fields[labels[i]], fields[labels[j]], out)
    if cubic_search is not None:
        if cubic_search > MAX_CUBIC_SEARCH:
            raise LimitError(
                f"cubic search cap is {MAX_CUBIC_SEARCH}, got {cubic_search}"
            )
        classes = enumerate_cubic_fields(cubic_search, progress=progress)
        pair_groups = equal_disc_groups(classes)
        npairs = 0
        for group in pair_groups:
            npairs += _cubic_group_reports(group, witness_bound, out)
        _emit(
            {
                "type": "cubic-search-summary",
                "limit": cubic_search,
                "fields": len(classes),
                "equal_disc_groups": len(pair_groups),
                "pairs": npairs,
            },
            out,
        )
    return EXIT_OK


def _oracle_checks(fld):
    """Yield (name, ok, detail) for every cross-check on one field."""
    gram = trace_gram(fld)
    yield ("det-equals-disc", gram.det == fld.disc,
           f"det={gram.det} disc={fld.disc}")
    r, s = fld.sig
    sig = signature(gram)
    yield ("signature-identity", sig == (r + s, s), f"sig(gram)={sig} (r,s)=({r},{s})")
    try:
        profile, _tame = ramification_profile(fld)
    except ConsistencyError as exc:
        yield ("tame-valuation", False, str(exc))
        return
    yield ("tame-valuation", True, "v_p(disc) = n - f_p at tame primes")
    for p in sorted(profile):
        sd = profile[p]
        if p == 2 or not sd.tame:
            continue
        alpha = first_ramification_factor(sd)
        h = nonresidue_odd_count(sd)
        ok = legendre_symbol(alpha, p) * (-1) ** sd.f_sum == (-1) ** (sd.g - h)
        yield (f"alpha-sign-identity@{p}", ok, f"alpha={alpha} h={h}")
        tame_diagonal_form(sd)  # raises if the det class drifts
        yield (f"block-form-det@{p}", True, "det class matches first factor")
        model = local_trace_model(fld, p)
        ok = diagonal_local_symbol_odd(model, p) == local_symbol_odd(gram, p)
        yield (f"local-model@{p}", ok,
               f"model={diagonal_local_symbol_odd(model, p)} "
               f"gram={local_symbol_odd(gram, p)}")
    if fld.n == 3 and 3 in profile and not profile[3].tame:
        # wild cubic: branch classification against the trace Gram at 3
        if fld.poly[2] == 0 and fld.poly[1] % 3 == 0:
            from .decide import cubic_local_form_at_3

            branch = cubic_local_form_at_3(fld.poly[1] // 3, fld.poly[0])
            ok = diagonal_local_symbol_odd(branch, 3) == local_symbol_odd(gram, 3)
            yield ("wild-cubic-local@3", ok, f"branch={list(map(str, branch.entries))}")


def cmd_oracle_check(records, out) -> int:
    fields = _build_fields(records)
    failures = 0
    for label in fields:
        for name, ok, detail in _oracle_checks(fields[label]):
            _emit({"type": "check", "label": label, "name": name,
                   "ok": ok, "detail": detail}, out)
            if not ok:
                failures += 1
    # pairwise: equal degree+disc with 2 tame in both -> equal 2-adic symbols
    labels = list(fields)
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            fa, fb = fields[labels[i]], fields[labels[j]]
            if fa.n != fb.n or fa.disc != fb.disc:
                continue
            tame_at_2 = True
            for fld in (fa, fb):
                profile, _ = ramification_profile(fld)
                if 2 in profile and not profile[2].tame:
                    tame_at_2 = False
            if not tame_at_2:
                continue
            ok = canonical_two_adic_symbol(trace_gram(fa)) == canonical_two_adic_symbol(
                trace_gram(fb)
            )
            _emit({"type": "check", "pair": [fa.label, fb.label],
                   "name": "two-adic-pair", "ok": ok, "detail": ""}, out)
            if not ok:
                failures += 1
    _emit({"type": "summary", "checks_failed": failures}, out)
    return EXIT_INVARIANT if failures else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="traceforms",
                     description="integral trace form invariants and decisions")
    sub = parser.add_subparsers(dest="command", required=True)

    p_inv = sub.add_parser("invariants", help="per-field invariant tables")
    p_inv.add_argument("records")

    p_cmp = sub.add_parser("compare", help="run every applicable criterion on a pair")
    p_cmp.add_argument("records")
    p_cmp.add_argument("label_a")
    p_cmp.add_argument("label_b")
    p_cmp.add_argument("--oracle", action="store_true",
                       help="also compare genus symbols of the trace Grams")
    p_cmp.add_argument("--witness-bound", type=int, default=None,
                       help="search for an explicit isometry with this entry bound")

    p_scan = sub.add_parser("scan", help="pairwise decisions within groups")
    p_scan.add_argument("records", nargs="?", default=None)
    p_scan.add_argument("--group-by-disc", action="store_true",
                        help="group by (degree, disc) only, ignoring signature")
    p_scan.add_argument("--cubic-search", type=int, default=None, metavar="N",
                        help="enumerate cubic fields with |disc| <= N and report "
                             "all equal-discriminant non-isomorphic pairs")
    p_scan.add_argument("--witness-bound", type=int, default=8)

    p_chk = sub.add_parser("oracle-check", help="run invariant cross-checks")
    p_chk.add_argument("records")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    out = sys.stdout

    def progress(done, total):
        sys.stderr.write(f"cubic search: {done}/{total}\r")
        sys.stderr.flush()

    try:
        if args.command == "scan":
            records = ingest(args.records) if args.records else []
            if args.records is None and args.cubic_search is None:
                sys.stderr.write("error: scan needs records or --cubic-search\n")
                return EXIT_USAGE
            return cmd_scan(
                records, out, group_by_disc=args.group_by_disc,
                cubic_search=args.cubic_search,
                witness_bound=args.witness_bound, progress=progress,
            )
        records = ingest(args.records)
        if args.command == "invariants":
            return cmd_invariants(records, out)
        if args.command == "compare":
            return cmd_compare(
                records, args.label_a, args.label_b, oracle=args.oracle,
                witness_bound=args.witness_bound, out=out,
            )
        if args.command == "oracle-check":
            return cmd_oracle_check(records, out)
    except (ParseError, LimitError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except (TamenessError, UnsupportedSplittingError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_TAME
    except TraceFormsError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

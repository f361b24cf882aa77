"""Command-line surface: job parsing, corpus files, deterministic reports.

Reports serialize every rational exactly as "numerator/denominator" (plain
integers omit the "/1") and never contain a floating-point representation;
timing is an integer millisecond count and is the one field excluded from
byte-for-byte determinism.  Exit status: 0 success, 1 some mathematical
check returned false on valid input, 2 input or precondition error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .opalg import (
    ApparentSingularityAtZero,
    DeltaOperator,
    NotMUM,
    OperatorSyntaxError,
    RawOperator,
    UnknownOperator,
    ZeroLeadingCoefficient,
    builtin,
    builtin_names,
    format_operator,
    hypergeometric,
    monicize,
    operator_p_integrality,
    parse_operator,
)
from .primes import is_prime, primes_upto
from .qcoord import (
    BadNormalization,
    canonical_coordinate,
    dieudonne_check,
    exp_integrality_check,
    n_integrality_report,
    omega_congruence_check,
)
from .series import (
    INF,
    BadConstantTerm,
    SeriesMatrix,
    SingularConstantTerm,
    TruncSeries,
    ValuationProfile,
    ZeroConstantTerm,
)
from .solve import solution_basis, solve_first_row, uniform_part, verify_solution
from .frobtransfer import (
    BadConstantShape,
    FrobeniusCandidate,
    InsufficientTruncation,
    NotPIntegralOperator,
    fit_frobenius_constant,
    iterate_transfer,
    radius_diagnostic,
    reduction_congruence_check,
    transfer_audit,
    verify_frobenius,
    working_trunc_for,
)

SCHEMA_VERSION = "1"
DEFAULT_TRUNC = 64
DEFAULT_PRIME_BOUND = 100


class CorpusFormatError(ValueError):
    pass


class DuplicateLabel(ValueError):
    pass


class InvalidPrime(ValueError):
    pass


_ERROR_CODES = {
    OperatorSyntaxError: "SYNTAX_ERROR",
    ZeroLeadingCoefficient: "ZERO_LEADING_COEFFICIENT",
    ApparentSingularityAtZero: "APPARENT_SINGULARITY_AT_ZERO",
    NotMUM: "NOT_MUM",
    UnknownOperator: "UNKNOWN_OPERATOR",
    ZeroConstantTerm: "ZERO_CONSTANT_TERM",
    BadConstantTerm: "BAD_CONSTANT_TERM",
    SingularConstantTerm: "SINGULAR_CONSTANT_TERM",
    BadNormalization: "BAD_NORMALIZATION",
    NotPIntegralOperator: "NOT_P_INTEGRAL_OPERATOR",
    InsufficientTruncation: "INSUFFICIENT_TRUNCATION",
    BadConstantShape: "BAD_CONSTANT_SHAPE",
    CorpusFormatError: "CORPUS_FORMAT_ERROR",
    DuplicateLabel: "DUPLICATE_LABEL",
    InvalidPrime: "INVALID_PRIME",
}


def error_code(exc: BaseException) -> str:
    for cls, code in _ERROR_CODES.items():
        if isinstance(exc, cls):
            return code
    return "INVALID_INPUT"


# ---------------------------------------------------------------------------
# job specification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JobSpec:
    command: str
    source_kind: str | None  # "op" | "file" | "builtin" | None (hypergeom)
    source_value: str | None
    trunc: int = DEFAULT_TRUNC
    primes: tuple[int, ...] | None = None  # explicit list, already validated
    auto_bound: int | None = None  # primes = all good primes <= bound
    level: int = 1
    check_kind: str | None = None
    candidate_path: str | None = None
    max_index: int = 50
    alpha: tuple[Fraction, ...] = ()
    beta: tuple[Fraction, ...] = ()
    scale: Fraction = Fraction(1)
    fmt: str = "human"
    out: str | None = None


@dataclass
class ReportDocument:
    command: str
    input_echo: dict
    results: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    timing_ms: int = 0

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": __version__,
            "command": self.command,
            "input": self.input_echo,
            "results": self.results,
            "errors": self.errors,
            "timing_ms": self.timing_ms,
        }


# ---------------------------------------------------------------------------
# exact serialization helpers
# ---------------------------------------------------------------------------


def fmt_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


def fmt_valuation(v) -> int | str:
    return "inf" if v == INF else int(v)


def series_payload(s: TruncSeries, limit: int | None = None) -> list[str]:
    coeffs = s.coeffs if limit is None else s.coeffs[:limit]
    return [fmt_rational(c) for c in coeffs]


def profile_payload(pr: ValuationProfile) -> dict:
    return {
        "prime": pr.prime,
        "min_valuation": fmt_valuation(pr.min_valuation),
        "negative_valuations": [[k, v] for k, v in pr.negative_valuations],
    }


# ---------------------------------------------------------------------------
# corpus and candidate files
# ---------------------------------------------------------------------------


def load_corpus_file(path) -> list[tuple[str, RawOperator]]:
    """Line-oriented corpus: `label :: operator-expression`, `#` comments."""
    out = []
    seen = set()
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "::" not in stripped:
            raise CorpusFormatError(
                f"{path}:{lineno}: expected 'label :: operator-expression'"
            )
        label, _, expr = stripped.partition("::")
        label = label.strip()
        if not label:
            raise CorpusFormatError(f"{path}:{lineno}: empty label")
        if label in seen:
            raise DuplicateLabel(f"{path}:{lineno}: duplicate label {label!r}")
        seen.add(label)
        try:
            raw = parse_operator(expr)
        except (OperatorSyntaxError, ZeroLeadingCoefficient) as exc:
            raise CorpusFormatError(f"{path}:{lineno}: {exc}") from exc
        out.append((label, raw))
    return out


def load_candidate_file(path) -> FrobeniusCandidate:
    """Candidate Frobenius matrix: JSON document with n, p, trunc and n*n
    coefficient lists of exact rational strings."""
    doc = json.loads(Path(path).read_text())
    n = int(doc["n"])
    p = int(doc["p"])
    trunc = int(doc["trunc"])
    entries = doc["entries"]
    if len(entries) != n or any(len(row) != n for row in entries):
        raise CorpusFormatError(f"{path}: entries must form an {n}x{n} array")
    rows = []
    for row in entries:
        series_row = []
        for coeff_list in row:
            coeffs = [parse_rational(c) for c in coeff_list]
            series_row.append(TruncSeries.from_coeffs(coeffs, trunc))
        rows.append(tuple(series_row))
    return FrobeniusCandidate(p, SeriesMatrix(tuple(rows)))


def dump_candidate(cand: FrobeniusCandidate) -> dict:
    return {
        "n": cand.phi.n,
        "p": cand.p,
        "trunc": cand.trunc,
        "entries": [
            [series_payload(e) for e in row] for row in cand.phi.entries
        ],
    }


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def _resolve_operators(spec: JobSpec) -> list[tuple[str, RawOperator]]:
    if spec.source_kind == "op":
        return [("inline", parse_operator(spec.source_value))]
    if spec.source_kind == "builtin":
        return [(spec.source_value, builtin(spec.source_value))]
    if spec.source_kind == "file":
        ops = load_corpus_file(spec.source_value)
        return sorted(ops, key=lambda item: item[0])
    raise ValueError("no operator source given")


def _resolve_primes(spec: JobSpec, op: DeltaOperator | None):
    """Returns (primes, skipped) where skipped lists (prime, reason)."""
    if spec.primes is not None:
        return list(spec.primes), []
    bound = spec.auto_bound if spec.auto_bound is not None else DEFAULT_PRIME_BOUND
    primes, skipped = [], []
    for p in primes_upto(bound):
        if op is not None and not operator_p_integrality(op, p).is_integral:
            skipped.append((p, "bad prime for operator"))
        else:
            primes.append(p)
    return primes, skipped


def cmd_dispatch(spec: JobSpec) -> tuple[ReportDocument, int]:
    started = time.monotonic()
    doc = ReportDocument(command=spec.command, input_echo=_input_echo(spec))
    try:
        status = _run_command(spec, doc)
    except Exception as exc:  # mapped to structured error entries
        doc.errors.append({"code": error_code(exc), "message": str(exc)})
        status = 2
    doc.timing_ms = int((time.monotonic() - started) * 1000)
    return doc, status


def _input_echo(spec: JobSpec) -> dict:
    echo = {
        "source_kind": spec.source_kind,
        "source_value": spec.source_value,
        "trunc": spec.trunc,
        "level": spec.level,
    }
    if spec.primes is not None:
        echo["primes"] = list(spec.primes)
    elif spec.auto_bound is not None:
        echo["primes"] = f"auto:{spec.auto_bound}"
    if spec.check_kind:
        echo["check"] = spec.check_kind
    if spec.candidate_path:
        echo["candidate"] = spec.candidate_path
    if spec.command == "hypergeom":
        echo["alpha"] = [fmt_rational(a) for a in spec.alpha]
        echo["beta"] = [fmt_rational(b) for b in spec.beta]
        echo["scale"] = fmt_rational(spec.scale)
    return echo


def _run_command(spec: JobSpec, doc: ReportDocument) -> int:
    handler = {
        "solve": _cmd_solve,
        "qcoord": _cmd_qcoord,
        "check": _cmd_check,
        "transfer": _cmd_transfer,
        "verify-frobenius": _cmd_verify_frobenius,
        "fit-frobenius": _cmd_fit_frobenius,
        "radius": _cmd_radius,
        "hypergeom": _cmd_hypergeom,
    }[spec.command]
    return handler(spec, doc)


def _cmd_solve(spec: JobSpec, doc: ReportDocument) -> int:
    for label, raw in _resolve_operators(spec):
        op = monicize(raw, spec.trunc)
        basis = solution_basis(op, spec.trunc)
        doc.results.append(
            {
                "label": label,
                "operator": format_operator(raw),
                "trunc": spec.trunc,
                "f": series_payload(basis.f),
                "first_row": [series_payload(s) for s in basis.first_row],
                "residual_order": verify_solution(basis),
            }
        )
    return 0


def _cmd_qcoord(spec: JobSpec, doc: ReportDocument) -> int:
    bound = spec.auto_bound
    if bound is None:
        bound = max(spec.primes) if spec.primes else DEFAULT_PRIME_BOUND
    for label, raw in _resolve_operators(spec):
        if raw.order < 2:
            raise NotMUM("the canonical coordinate needs an operator of order >= 2")
        op = monicize(raw, spec.trunc)
        row = solve_first_row(op, spec.trunc)
        q = canonical_coordinate(row[0], row[1])
        report = n_integrality_report(
            q, prime_bound=bound, subject=f"canonical_coordinate({label})"
        )
        doc.results.append(
            {
                "label": label,
                "q": series_payload(q),
                "report": {
                    "subject": report.subject,
                    "certified_trunc": report.certified_trunc,
                    "bad_primes": list(report.bad_primes),
                    "suggested_N": str(report.suggested_N),
                    "worst_valuations": [
                        [p, v] for p, v in report.worst_valuations
                    ],
                    "per_prime": [
                        [p, profile_payload(pr)] for p, pr in report.per_prime
                    ],
                    "unfactored_residue": str(report.unfactored_residue),
                },
            }
        )
    return 0


def _cmd_check(spec: JobSpec, doc: ReportDocument) -> int:
    failures = 0
    for label, raw in _resolve_operators(spec):
        trunc = spec.trunc
        op = monicize(raw, trunc)
        primes, skipped = _resolve_primes(spec, op)
        for p, reason in skipped:
            doc.results.append({"label": label, "prime": p, "skipped": reason})
        row = None
        if spec.check_kind != "reduction":
            if raw.order < 2 and spec.check_kind in ("omega", "expint"):
                raise NotMUM(f"{spec.check_kind} needs an operator of order >= 2")
            row = solve_first_row(op, trunc)
        for p in primes:
            entry = {"label": label, "prime": p, "check": spec.check_kind}
            if spec.check_kind == "reduction":
                # auto-raise so the mod z^{p^m + 1} congruence is decidable
                needed = p**spec.level + 1
                working = max(spec.trunc, needed)
                op_r = monicize(raw, working)
                ok = reduction_congruence_check(op_r, p, spec.level)
                entry["working_trunc"] = working
                entry["congruence_order"] = needed
            elif spec.check_kind == "dieudonne":
                ok, profile = dieudonne_check(row[0], p)
                entry["profile"] = profile_payload(profile)
            elif spec.check_kind == "omega":
                ok, profile = omega_congruence_check(row[0], row[1], p)
                entry["profile"] = profile_payload(profile)
            elif spec.check_kind == "expint":
                ok = exp_integrality_check(row[1] * row[0].invert(), p)
            else:
                raise ValueError(f"unknown check {spec.check_kind!r}")
            entry["ok"] = bool(ok)
            entry["certified_trunc"] = entry.get("congruence_order", trunc)
            failures += 0 if ok else 1
            doc.results.append(entry)
    return 1 if failures else 0


def _cmd_transfer(spec: JobSpec, doc: ReportDocument) -> int:
    failures = 0
    for label, raw in _resolve_operators(spec):
        probe = monicize(raw, 2)
        primes, skipped = _resolve_primes(spec, probe)
        for p, reason in skipped:
            doc.results.append({"label": label, "prime": p, "skipped": reason})
        for p in primes:
            working = working_trunc_for(spec.trunc, p, spec.level)
            op = monicize(raw, working)
            if not operator_p_integrality(op, p).is_integral:
                raise NotPIntegralOperator(
                    f"operator is not {p}-integral up to order {working}"
                )
            data = iterate_transfer(op, p, spec.level, target_trunc=spec.trunc)
            audit = transfer_audit(op, data)
            doc.results.append(
                {
                    "label": label,
                    "prime": p,
                    "level": spec.level,
                    "working_trunc": working,
                    "certified_trunc": data.trunc,
                    "transferred_coeffs": [
                        series_payload(a, limit=data.trunc)
                        for a in data.operator.coeffs
                    ],
                    "h_constant_diagonal": [
                        fmt_rational(data.h.constant_matrix()[i][i])
                        for i in range(data.h.n)
                    ],
                    "h_profile": profile_payload(audit.h_profile),
                    "operator_profile": profile_payload(audit.operator_profile),
                    "h_constant_ok": audit.h_constant_ok,
                    "equation_residual_order": audit.equation_residual_order,
                    "equation_trunc": audit.equation_trunc,
                    "ok": audit.ok,
                }
            )
            failures += 0 if audit.ok else 1
    return 1 if failures else 0


def _cmd_verify_frobenius(spec: JobSpec, doc: ReportDocument) -> int:
    cand = load_candidate_file(spec.candidate_path)
    failures = 0
    for label, raw in _resolve_operators(spec):
        op = monicize(raw, max(spec.trunc, cand.trunc))
        ver = verify_frobenius(op, cand)
        doc.results.append(
            {
                "label": label,
                "prime": cand.p,
                "residual_order": ver.residual_order,
                "trunc": ver.trunc,
                "profile": profile_payload(ver.profile),
                "det_nonzero": ver.det_nonzero,
                "constant_shape_ok": ver.constant_shape_ok,
                "ok": ver.ok,
            }
        )
        failures += 0 if ver.ok else 1
    return 1 if failures else 0


def _cmd_fit_frobenius(spec: JobSpec, doc: ReportDocument) -> int:
    failures = 0
    for label, raw in _resolve_operators(spec):
        op = monicize(raw, spec.trunc)
        primes, skipped = _resolve_primes(spec, op)
        for p, reason in skipped:
            doc.results.append({"label": label, "prime": p, "skipped": reason})
        for p in primes:
            y = uniform_part(op, spec.trunc)
            fit = fit_frobenius_constant(y, p)
            entry = {
                "label": label,
                "prime": p,
                "trunc": fit.trunc,
                "found": fit.found,
                "orders_used": fit.orders_used,
                "unit_pivot": fit.unit_pivot,
                "profile": profile_payload(fit.profile),
            }
            if fit.found:
                entry["constant"] = [
                    [fmt_rational(x) for x in row] for row in fit.constant
                ]
                entry["twist_parameters"] = [fmt_rational(g) for g in fit.gammas]
            doc.results.append(entry)
            failures += 0 if fit.found else 1
    return 1 if failures else 0


def _cmd_radius(spec: JobSpec, doc: ReportDocument) -> int:
    for label, raw in _resolve_operators(spec):
        op = monicize(raw, spec.trunc)
        primes, skipped = _resolve_primes(spec, op)
        for p, reason in skipped:
            doc.results.append({"label": label, "prime": p, "skipped": reason})
        for p in primes:
            diag = radius_diagnostic(op, p, spec.max_index)
            doc.results.append(
                {
                    "label": label,
                    "prime": p,
                    "trunc": diag.trunc,
                    "norm_semantics": "exponents of truncated entries; "
                    "lower bounds on true Gauss norms",
                    "rows": [
                        {
                            "j": r.j,
                            "min_valuation": fmt_valuation(r.min_valuation),
                            "scaled_min_valuation": fmt_valuation(
                                r.scaled_min_valuation
                            ),
                        }
                        for r in diag.rows
                    ],
                    "trending_to_zero": diag.trending_to_zero,
                }
            )
    return 0


def _cmd_hypergeom(spec: JobSpec, doc: ReportDocument) -> int:
    raw = hypergeometric(spec.alpha, spec.beta, spec.scale)
    op = monicize(raw, 2)
    doc.results.append(
        {
            "operator": format_operator(raw),
            "order": raw.order,
            "mum_after_monicize": op.is_mum(),
        }
    )
    return 0


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------


def emit_report(doc: ReportDocument, fmt: str) -> bytes:
    if fmt == "json":
        return (json.dumps(doc.to_dict(), indent=2) + "\n").encode()
    return _human_report(doc).encode()


def _human_report(doc: ReportDocument) -> str:
    lines = [f"mumkit {__version__} :: {doc.command}"]
    for key, value in doc.input_echo.items():
        if value is not None:
            lines.append(f"  {key:<14} {value}")
    for err in doc.errors:
        lines.append(f"error [{err['code']}] {err['message']}")
    for result in doc.results:
        lines.append("")
        for key, value in result.items():
            if key == "rows":
                lines.append(f"  {'j':>4} {'||A_j||':>12} {'||A_j/j!||':>12}")
                for row in value:
                    lines.append(
                        f"  {row['j']:>4} {_norm_str(row['min_valuation']):>12}"
                        f" {_norm_str(row['scaled_min_valuation']):>12}"
                    )
            elif isinstance(value, list):
                lines.append(f"  {key:<22} {_short_list(value)}")
            else:
                lines.append(f"  {key:<22} {value}")
    lines.append("")
    lines.append(f"elapsed {doc.timing_ms} ms")
    return "\n".join(lines) + "\n"


def _norm_str(v) -> str:
    return "0" if v == "inf" else f"p^{-v}"


def _short_list(value, limit: int = 12) -> str:
    text = json.dumps(value)
    if len(value) > limit and len(text) > 160:
        head = json.dumps(value[:limit])
        return head[:-1] + ", ...]"
    return text


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_source_args(parser: argparse.ArgumentParser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--op", help="inline operator expression")
    group.add_argument("--file", help="corpus file of labelled operators")
    group.add_argument(
        "--builtin", help=f"catalog operator ({', '.join(builtin_names())})"
    )


def _add_common_args(parser: argparse.ArgumentParser, primes: bool = True):
    parser.add_argument("--trunc", type=int, default=DEFAULT_TRUNC)
    if primes:
        parser.add_argument(
            "--primes", default=None, help="comma list (7,11) or auto:BOUND"
        )
    parser.add_argument("--format", choices=("human", "json"), default="human")
    parser.add_argument("--out", default=None, help="write the report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mumkit",
        description="exact arithmetic for MUM operators in D = z*d/dz",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="series solutions f, g, first row")
    _add_source_args(p_solve)
    _add_common_args(p_solve, primes=False)

    p_qcoord = sub.add_parser("qcoord", help="canonical coordinate + audit")
    _add_source_args(p_qcoord)
    _add_common_args(p_qcoord)

    p_check = sub.add_parser("check", help="congruence checks")
    p_check.add_argument(
        "kind", choices=("dieudonne", "omega", "expint", "reduction")
    )
    _add_source_args(p_check)
    _add_common_args(p_check)
    p_check.add_argument("--level", type=int, default=1)

    p_transfer = sub.add_parser("transfer", help="level-m operator and gauge")
    _add_source_args(p_transfer)
    _add_common_args(p_transfer)
    p_transfer.add_argument("--level", type=int, default=1)

    p_verify = sub.add_parser("verify-frobenius", help="audit a candidate Phi")
    _add_source_args(p_verify)
    _add_common_args(p_verify, primes=False)
    p_verify.add_argument("--candidate", required=True)

    p_fit = sub.add_parser("fit-frobenius", help="search for an integral Phi")
    _add_source_args(p_fit)
    _add_common_args(p_fit)

    p_radius = sub.add_parser("radius", help="Gauss-norm diagnostics of A_j")
    _add_source_args(p_radius)
    _add_common_args(p_radius)
    p_radius.add_argument("--max-j", type=int, default=50, dest="max_index")

    p_hyper = sub.add_parser("hypergeom", help="hypergeometric constructor")
    p_hyper.add_argument("--alpha", required=True, help="comma rationals")
    p_hyper.add_argument("--beta", required=True, help="comma rationals")
    p_hyper.add_argument("--scale", default="1")
    _add_common_args(p_hyper, primes=False)

    return parser


def _parse_primes_arg(text: str | None):
    """Returns (explicit_primes, auto_bound)."""
    if text is None:
        return None, None
    if text.startswith("auto:"):
        bound = int(text[len("auto:") :])
        if bound < 2:
            raise InvalidPrime(f"auto bound {bound} is below 2")
        return None, bound
    primes = []
    for chunk in text.split(","):
        value = int(chunk.strip())
        if not is_prime(value):
            raise InvalidPrime(f"{value} is not prime")
        primes.append(value)
    if not primes:
        raise InvalidPrime("empty prime list")
    return tuple(primes), None


def _parse_rational_list(text: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(chunk.strip()) for chunk in text.split(","))


def spec_from_args(args: argparse.Namespace) -> JobSpec:
    source_kind = source_value = None
    for kind in ("op", "file", "builtin"):
        value = getattr(args, kind, None)
        if value is not None:
            source_kind, source_value = kind, value
    primes, auto_bound = _parse_primes_arg(getattr(args, "primes", None))
    if getattr(args, "trunc", 1) < 1:
        raise ValueError("truncation order must be positive")
    return JobSpec(
        command=args.command,
        source_kind=source_kind,
        source_value=source_value,
        trunc=getattr(args, "trunc", DEFAULT_TRUNC),
        primes=primes,
        auto_bound=auto_bound,
        level=getattr(args, "level", 1),
        check_kind=getattr(args, "kind", None),
        candidate_path=getattr(args, "candidate", None),
        max_index=getattr(args, "max_index", 50),
        alpha=_parse_rational_list(args.alpha) if hasattr(args, "alpha") else (),
        beta=_parse_rational_list(args.beta) if hasattr(args, "beta") else (),
        scale=Fraction(args.scale) if hasattr(args, "scale") else Fraction(1),
        fmt=args.format,
        out=args.out,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = spec_from_args(args)
    except (ValueError, ZeroDivisionError) as exc:
        doc = ReportDocument(command=args.command, input_echo={})
        doc.errors.append({"code": error_code(exc), "message": str(exc)})
        _write(doc, args.format, args.out)
        return 2
    doc, status = cmd_dispatch(spec)
    _write(doc, spec.fmt, spec.out)
    return status


def _write(doc: ReportDocument, fmt: str, out: str | None):
    payload = emit_report(doc, fmt)
    if out:
        Path(out).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)


if __name__ == "__main__":
    sys.exit(main())

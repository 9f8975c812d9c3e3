"""``revpref`` command line.

Exit status is 0 when the axiom holds (or a value was computed), 1 when it
fails, and 2 on bad input or an internal error. Reports go to standard output
as JSON (default) or plain text. Observation and ground indices in witnesses
are 1-based; every rational is written as ``"n/d"``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from ._rational import format_rational, to_rational
from .acyclicity import (
    Verdict,
    check_garp,
    check_gapp,
    check_p_acyclic,
    check_sarp,
    check_warp_dataset,
)
from .afriat import (
    AfriatNumbers,
    afriat_numbers,
    check_differentiable_precondition,
    fm_numbers,
    quasilinear_params,
    sarp_numbers,
    strict_concave_utility,
)
from .choice import check_congruence, check_order_garp, order_rationalize
from .efficiency import check_egarp, compute_ccei
from .errors import AxiomViolationError, InputError, RevPrefError
from .generate import FAMILIES, GeneratorConfig, generate
from .io import (
    build_preorder,
    format_purchase_csv,
    load_json_text,
    parse_choice_json,
    parse_mechanism_json,
    parse_purchase_csv,
    parse_table_json,
    read_text,
)
from .mechanism import check_implementable, synthesize_linear_contract

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
DEFAULT_MAX_T = 10_000

CHECKS = (
    "garp", "warp", "sarp", "egarp", "gapp", "pacyclic",
    "congruence", "order-garp", "diff-precondition", "mech",
)
CONSTRUCTS = (
    "afriat", "sarp-numbers", "strict-utility", "fm",
    "quasilinear", "order-utility", "contract",
)


@dataclass
class Report:
    command: str
    verdict: str
    witness: list[int] | None = None
    numbers: dict[str, Any] | None = None
    details: dict[str, Any] = field(default_factory=dict)
    timing_ms: float = 0.0

    @property
    def exit_code(self) -> int:
        return EXIT_FAIL if self.verdict == "fail" else EXIT_PASS

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"command": self.command, "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.numbers is not None:
            out["numbers"] = self.numbers
        out.update(self.details)
        out["timing_ms"] = round(self.timing_ms, 3)
        return out

    def to_text(self) -> str:
        lines = [f"command: {self.command}", f"verdict: {self.verdict}"]
        if self.witness is not None:
            cycle = " -> ".join(str(i) for i in self.witness + self.witness[:1])
            lines.append(f"witness: {cycle}")
        for key, value in self.details.items():
            lines.append(f"{key}: {_text_value(value)}")
        for key, value in (self.numbers or {}).items():
            lines.append(f"{key}: {_text_value(value)}")
        lines.append(f"timing_ms: {self.timing_ms:.3f}")
        return "\n".join(lines)


def _text_value(value: Any) -> str:
    if isinstance(value, list):
        return " ".join(_text_value(v) for v in value)
    return str(value)


def _rat(q: Fraction) -> str:
    return format_rational(q)


def _rats(values: Sequence[Fraction]) -> list[str]:
    return [_rat(v) for v in values]


def _one_based(indices: Sequence[int]) -> list[int]:
    return [i + 1 for i in indices]


def _verdict_report(command: str, verdict: Verdict) -> Report:
    if verdict:
        return Report(command, "pass")
    return Report(command, "fail", _one_based(verdict.witness.cycle))


def _afriat_payload(numbers: AfriatNumbers) -> dict[str, Any]:
    return {
        "u": _rats(numbers.u),
        "lambda": _rats(numbers.lam),
        "levels": list(numbers.levels),
    }


# ---------------------------------------------------------------- loading


def _max_t() -> int:
    raw = os.environ.get("REVPREF_MAX_T", str(DEFAULT_MAX_T))
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"REVPREF_MAX_T must be an integer, got {raw!r}", "environment") from None
    if cap < 1:
        raise InputError("REVPREF_MAX_T must be positive", "environment")
    return cap


def _cap(count: int, what: str) -> None:
    cap = _max_t()
    if count > cap:
        raise InputError(f"{count} {what} exceed the REVPREF_MAX_T cap of {cap}", "input")


def _need_input(args) -> str:
    if not args.input:
        raise InputError("an input file is required for this command", "arguments")
    return args.input


def _purchase(args):
    data = parse_purchase_csv(_need_input(args))
    _cap(data.n_obs, "observations")
    return data


def _choice(args):
    choice = parse_choice_json(_need_input(args))
    _cap(choice.data.n_obs, "observations")
    return choice


def _mechanism(args):
    data = parse_mechanism_json(_need_input(args))
    _cap(data.size, "types")
    return data


def _preorder(choice, args):
    override = None
    if args.preorder:
        override = args.preorder
        if os.path.isfile(args.preorder):
            override = load_json_text(read_text(args.preorder))
    return build_preorder(choice, override)


# ---------------------------------------------------------------- commands


def _check(args) -> Report:
    axiom = args.axiom
    name = f"check {axiom}"
    simple: dict[str, Callable] = {
        "garp": check_garp,
        "warp": check_warp_dataset,
        "sarp": check_sarp,
        "gapp": check_gapp,
        "pacyclic": check_p_acyclic,
    }
    if axiom in simple:
        return _verdict_report(name, simple[axiom](_purchase(args)))
    if axiom == "egarp":
        if args.e is None:
            raise InputError("check egarp needs --e", "--e")
        e = _parse_e(args.e)
        report = _verdict_report(name, check_egarp(_purchase(args), e))
        report.details["e"] = _rat(e)
        return report
    if axiom == "diff-precondition":
        result = check_differentiable_precondition(_purchase(args))
        if result:
            return Report(name, "pass")
        if result.sarp_witness is not None:
            return Report(name, "fail", _one_based(result.sarp_witness.cycle),
                          details={"reason": "sarp"})
        return Report(name, "fail", details={
            "reason": "equal bundles at non-proportional prices",
            "pair": _one_based(result.pair),
        })
    if axiom == "congruence":
        choice = _choice(args)
        report = _verdict_report(name, check_congruence(choice.data))
        if report.witness:
            report.details["witness_labels"] = [choice.data.labels[i - 1] for i in report.witness]
        return report
    if axiom == "order-garp":
        choice = _choice(args)
        return _verdict_report(name, check_order_garp(choice.data, _preorder(choice, args)))
    if axiom == "mech":
        return _verdict_report(name, check_implementable(_mechanism(args)))
    raise InputError(f"unknown check {axiom!r}", "arguments")


def _parse_e(raw: str) -> Fraction:
    try:
        e = to_rational(raw)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc), "--e") from None
    if not 0 < e <= 1:
        raise InputError(f"efficiency must lie in (0, 1], got {raw}", "--e")
    return e


def _construct(args) -> Report:
    what = args.what
    name = f"construct {what}"
    if what == "afriat":
        return Report(name, "pass", numbers=_afriat_payload(afriat_numbers(_purchase(args))))
    if what == "sarp-numbers":
        return Report(name, "pass", numbers=_afriat_payload(sarp_numbers(_purchase(args))))
    if what == "strict-utility":
        data = _purchase(args)
        numbers = sarp_numbers(data)
        utility = strict_concave_utility(numbers, data)
        payload = _afriat_payload(numbers)
        payload["epsilon"] = _rat(utility.perturbation.epsilon)
        payload["curvature_T"] = _rat(utility.perturbation.t_param)
        return Report(name, "pass", numbers=payload)
    if what == "fm":
        if not args.table:
            raise InputError("construct fm needs --table", "--table")
        table = parse_table_json(args.table)
        _cap(table.size, "observations")
        return Report(name, "pass", numbers=_afriat_payload(fm_numbers(table)))
    if what == "quasilinear":
        data = _purchase(args)
        numbers = afriat_numbers(data)
        params = quasilinear_params(numbers, data)
        payload = _afriat_payload(numbers)
        payload["m"] = _rat(params.m)
        payload["q"] = _rats(params.q)
        return Report(name, "pass", numbers=payload)
    if what == "order-utility":
        choice = _choice(args)
        utility = order_rationalize(choice.data, _preorder(choice, args))
        labels = choice.data.labels
        return Report(name, "pass", numbers={
            "utility": [{"label": labels[i], "value": utility[i]} for i in sorted(utility)]
        })
    if what == "contract":
        contract = synthesize_linear_contract(_mechanism(args))
        return Report(name, "pass", numbers={"u": _rats(contract.u), "lambda": _rats(contract.lam)})
    raise InputError(f"unknown construction {what!r}", "arguments")


def _ccei(args) -> Report:
    result = compute_ccei(_purchase(args), exhaustive=args.exhaustive)
    details: dict[str, Any] = {"value": _rat(result.value), "attained": result.attained}
    if result.failing_witness_above is not None:
        details["failing_witness_above"] = _one_based(result.failing_witness_above.cycle)
    details["breakpoints"] = _rats(result.breakpoints)
    return Report("ccei", "value", details=details)


def _generate(args, out) -> Report | None:
    _cap(args.obs, "observations")
    try:
        config = GeneratorConfig(
            goods=args.goods,
            observations=args.obs,
            seed=args.seed,
            family=args.family,
            efficiency=_parse_e(args.e) if args.e is not None else Fraction(1),
        )
    except ValueError as exc:
        raise InputError(str(exc), "arguments") from None
    text = format_purchase_csv(generate(config))
    if args.output is None:
        out.write(text)
        return None
    with open(args.output, "w") as fh:
        fh.write(text)
    return Report("generate", "value", details={"output": args.output, "observations": args.obs})


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="revpref", description="Revealed preference tests and constructions."
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")

    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common], help="test an axiom")
    check.add_argument("axiom", choices=CHECKS)
    check.add_argument("input", nargs="?", help="CSV or JSON input file")
    check.add_argument("--e", help="efficiency level for egarp, e.g. 2/3")
    check.add_argument("--preorder", help="preorder name or JSON file for order-garp")

    construct = sub.add_parser("construct", parents=[common], help="build a certificate")
    construct.add_argument("what", choices=CONSTRUCTS)
    construct.add_argument("input", nargs="?", help="CSV or JSON input file")
    construct.add_argument("--table", help="expenditure-table JSON for fm")
    construct.add_argument("--preorder", help="preorder name or JSON file for order-utility")

    ccei = sub.add_parser("ccei", parents=[common], help="critical cost-efficiency index")
    ccei.add_argument("input", help="purchase CSV")
    ccei.add_argument("--exhaustive", action="store_true", help="test every region instead of bisecting")

    gen = sub.add_parser("generate", parents=[common], help="synthetic purchase data")
    gen.add_argument("--goods", type=int, default=2)
    gen.add_argument("--obs", type=int, default=10)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--family", choices=FAMILIES, default="cobb-douglas")
    gen.add_argument("--e", help="efficiency in (0, 1]")
    gen.add_argument("--output", help="write CSV here instead of standard output")
    return parser


def _emit(report: Report, fmt: str, out) -> None:
    if fmt == "text":
        out.write(report.to_text() + "\n")
    else:
        out.write(json.dumps(report.to_json()) + "\n")


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    name = {
        "check": lambda: f"check {args.axiom}",
        "construct": lambda: f"construct {args.what}",
    }.get(args.command, lambda: args.command)()
    start = time.perf_counter()
    try:
        if args.command == "check":
            report = _check(args)
        elif args.command == "construct":
            report = _construct(args)
        elif args.command == "ccei":
            report = _ccei(args)
        else:
            report = _generate(args, out)
            if report is None:
                return EXIT_PASS
    except AxiomViolationError as exc:
        witness = _one_based(exc.witness.cycle) if exc.witness is not None else None
        report = Report(name, "fail", witness, details={"axiom": exc.axiom})
    except InputError as exc:
        report = Report(name, "error", details={"error": str(exc), "location": exc.location})
        report.timing_ms = (time.perf_counter() - start) * 1000
        _emit(report, args.format, out)
        return EXIT_ERROR
    except RevPrefError as exc:
        report = Report(name, "error", details={"error": str(exc)})
        report.timing_ms = (time.perf_counter() - start) * 1000
        _emit(report, args.format, out)
        return EXIT_ERROR
    report.timing_ms = (time.perf_counter() - start) * 1000
    _emit(report, args.format, out)
    return report.exit_code


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))

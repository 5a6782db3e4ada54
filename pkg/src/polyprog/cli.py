"""Command-line interface: ``polyprog check|run|certify|bounds|compile-tm``.

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 certification
failure, 4 fuel or step limit reached, 5 bound violation.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

from .bounds import NotAdditive, compute_bounds, monitored_run
from .engine import (
    DEFAULT_FUEL,
    STRATEGIES,
    FuelExhausted,
    Undefined,
    check_completeness,
    check_orthogonal,
    run,
)
from .frontend import NotAValue, ProgramError, format_value, load_program, parse_value
from .interp import DEFAULT_BOUND, InterpSyntaxError, certify, load_interp
from .interp.expr import render
from .signature import validate_polygraph
from .tmc import (
    StepLimit,
    TMError,
    clocked_interp_source,
    compile_clocked_tm_source,
    compile_tm_source,
    decode_word,
    encode_word,
    format_clock,
    load_tm,
    parse_clock,
    simulate_tm,
)

OK, USAGE, INVALID, UNCERTIFIED, EXHAUSTED, VIOLATION = 0, 1, 2, 3, 4, 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit with 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


def _program(path: str):
    return load_program(_read(path))


def _interp(path: str, P):
    return load_interp(_read(path), P)


def _arguments(P, fname: str, texts):
    cell = P.two_cells.get(fname)
    if cell is None or cell.kind != "function":
        raise UsageError(f"{fname!r} is not a function of the program")
    if len(texts) != cell.arity:
        raise UsageError(f"{fname} takes {cell.arity} arguments, got {len(texts)}")
    return [parse_value(t, s, P) for t, s in zip(texts, cell.src)]


# ---------------------------------------------------------------------------
# commands

def cmd_check(args) -> int:
    P = _program(args.program)
    validity = validate_polygraph(P)
    orth = check_orthogonal(P)
    comp = check_completeness(P, args.depth)
    ok = validity.ok and orth.ok and comp.ok
    lines = [f"{args.program}: {len(P.computation_rules)} computation rules, "
             f"{len(P.structure_rules)} structure rules"]
    lines += [f"  invalid: {v}" for v in validity.violations]
    for o in orth.overlaps:
        lines.append(f"  overlap {o.first} / {o.second} on {o.term} ({'weak' if o.weak else 'critical'})")
    lines += [f"  not left-linear: {r}" for r in orth.nonlinear]
    for f, fargs in comp.counterexamples:
        lines.append(f"  incomplete: no rule applies to {f}({', '.join(map(str, fargs))})")
    lines.append("OK" if ok else "FAILED")
    _emit(args, {"ok": ok, "valid": validity.ok, "violations": [str(v) for v in validity.violations],
                 "computation_rules": len(P.computation_rules), "structure_rules": len(P.structure_rules),
                 "orthogonality": orth.to_json(), "completeness": comp.to_json()}, "\n".join(lines))
    return OK if ok else INVALID


def cmd_run(args) -> int:
    P = _program(args.program)
    values = _arguments(P, args.function, args.args)
    trace = None
    code = OK
    try:
        result, trace = run(P, args.function, values, args.strategy, args.fuel)
        out = {"ok": True, "result": [format_value(v, P) for v in result], "steps": trace.counts()}
        text = ", ".join(out["result"])
    except FuelExhausted as exc:
        trace = exc.trace
        out = {"ok": False, "error": "fuel exhausted", "steps": trace.counts()}
        text = f"fuel exhausted after {trace.total} rewrites"
        code = EXHAUSTED
    except Undefined as exc:
        trace = exc.trace
        out = {"ok": False, "error": str(exc), "steps": trace.counts()}
        text = str(exc)
        code = INVALID
    if args.trace:
        Path(args.trace).write_text(trace.to_jsonl(), encoding="utf-8")
    _emit(args, out, text)
    return code


def cmd_certify(args) -> int:
    P = _program(args.program)
    I = _interp(args.interp, P)
    cert = certify(P, I, args.bound, args.depth)
    lines = [f"additive: {cert.additive} (gamma = {cert.gamma})", f"cartesian: {cert.cartesian}",
             f"polynomial: {'yes' if cert.polynomial else 'no'}"]
    for name, rv in sorted(cert.rules.items()):
        lines.append(f"rule {name} [{cert.kinds[name]}]: current {rv.current}; heat {rv.heat}; "
                     f"conservative {rv.conservative}")
    lines.append(f"complete up to depth {args.depth}: {'yes' if cert.completeness.ok else 'no'}")
    lines.append(f"orthogonal: {'yes' if cert.orthogonality.ok else 'no'}")
    lines += [f"FAIL {f}" for f in cert.failures()]
    lines.append(f"member of the polynomial class up to bound {args.bound}" if cert.ok
                 else "NOT CERTIFIED")
    _emit(args, cert.to_json(), "\n".join(lines))
    return OK if cert.ok else UNCERTIFIED


def cmd_bounds(args) -> int:
    P = _program(args.program)
    I = _interp(args.interp, P)
    if args.function not in {f.name for f in P.functions}:
        raise UsageError(f"{args.function!r} is not a function of the program")
    bounds = compute_bounds(P, I)
    fb = bounds[args.function]
    lines = [f"gamma = {bounds.gamma}, K = {bounds.K}"]
    lines += [f"{k}_{args.function}(x) = {render(getattr(fb, k))}" for k in ("M", "S", "P", "Q")]
    rows = []
    code = OK
    for item in args.inputs:
        texts = [t for t in item.split(";")] if item else []
        values = _arguments(P, args.function, texts)
        try:
            _, _, report = monitored_run(P, I, args.function, values, bounds, args.strategy, args.fuel,
                                         raise_on_violation=False)
        except FuelExhausted:
            lines.append(f"{item}: fuel exhausted")
            rows.append({"input": item, "error": "fuel exhausted"})
            code = max(code, EXHAUSTED)
            continue
        except Undefined as exc:
            lines.append(f"{item}: {exc}")
            rows.append({"input": item, "error": str(exc)})
            code = max(code, INVALID)
            continue
        row = report.to_json()
        row["input"] = item
        rows.append(row)
        p = report.predicted
        lines.append(f"{args.function}({', '.join(texts)}) sizes {list(report.sizes)}: "
                     f"computation {report.computation_steps} <= P {p['P']}, "
                     f"total {report.total_steps} <= Q {p['Q']}, "
                     f"current {report.max_current} <= M {p['M']}"
                     + ("" if report.ok else "  VIOLATION: " + "; ".join(report.violations)))
        if not report.ok:
            code = VIOLATION
    payload = bounds.to_json()
    payload["rows"] = rows
    _emit(args, payload, "\n".join(lines))
    return code


def cmd_compile_tm(args) -> int:
    M = load_tm(args.machine)
    prefix = Path(args.output or Path(args.machine).with_suffix(""))
    coeffs = parse_clock(args.clock) if args.clock else None
    if coeffs is None:
        source = compile_tm_source(M)
    else:
        source = compile_clocked_tm_source(M, coeffs)
    poly_path = prefix.with_name(prefix.name + ".poly")
    poly_path.write_text(source, encoding="utf-8")
    written = [str(poly_path)]
    if coeffs is not None:
        interp_path = prefix.with_name(prefix.name + ".interp")
        interp_path.write_text(clocked_interp_source(M, coeffs), encoding="utf-8")
        written.append(str(interp_path))
    payload = {"files": written, "clock": format_clock(coeffs) if coeffs is not None else None}
    lines = [f"wrote {w}" for w in written]
    code = OK
    if args.verify is not None:
        P = load_program(source)
        mismatches = []
        checked = 0
        for n in range(args.verify + 1):
            for word in itertools.product(M.alphabet, repeat=n):
                checked += 1
                expected, _ = simulate_tm(M, word, args.steps)
                try:
                    (got,), _ = run(P, "f", [encode_word(word)], fuel=args.fuel)
                    got = decode_word(got)
                except (Undefined, FuelExhausted) as exc:
                    got = f"<{type(exc).__name__}>"
                if got != expected.right:
                    mismatches.append({"word": "".join(word), "expected": "".join(expected.right),
                                       "got": got if isinstance(got, str) else "".join(got)})
        payload["verify"] = {"checked": checked, "mismatches": mismatches}
        lines.append(f"checked {checked} words up to length {args.verify}: "
                     f"{len(mismatches)} disagree with the simulator")
        for m in mismatches[:5]:
            lines.append(f"  {m['word'] or 'e'}: machine {m['expected'] or 'e'}, program {m['got'] or 'e'}")
        if mismatches:
            code = INVALID
    _emit(args, payload, "\n".join(lines))
    return code


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polyprog", description="Polygraphic programs: run, certify and bound them.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    def engine_opts(sp):
        sp.add_argument("--strategy", choices=STRATEGIES, default=STRATEGIES[0])
        sp.add_argument("--fuel", type=int, default=DEFAULT_FUEL, help="maximum number of rewrites")

    sp = sub.add_parser("check", help="validate a program: well-formed, orthogonal, complete")
    sp.add_argument("program")
    sp.add_argument("--depth", type=int, default=4, help="value depth for the completeness check")
    common(sp)
    sp.set_defaults(handler=cmd_check)

    sp = sub.add_parser("run", help="evaluate a function on values")
    sp.add_argument("program")
    sp.add_argument("function")
    sp.add_argument("args", nargs="*", help="values: 7, [2,1], \"ab\" or constructor terms")
    sp.add_argument("--trace", metavar="OUT", help="write the rewrite trace as JSON lines")
    engine_opts(sp)
    common(sp)
    sp.set_defaults(handler=cmd_run)

    sp = sub.add_parser("certify", help="check an interpretation places a program in the polynomial class")
    sp.add_argument("program")
    sp.add_argument("interp")
    sp.add_argument("--bound", type=int, default=DEFAULT_BOUND, help="sampling bound per coordinate")
    sp.add_argument("--depth", type=int, default=4, help="value depth for the completeness check")
    common(sp)
    sp.set_defaults(handler=cmd_certify)

    sp = sub.add_parser("bounds", help="bound maps of a function and monitored runs")
    sp.add_argument("program")
    sp.add_argument("interp")
    sp.add_argument("function")
    sp.add_argument("inputs", nargs="*", help="one argument tuple per input, arguments separated by ';'")
    engine_opts(sp)
    common(sp)
    sp.set_defaults(handler=cmd_bounds)

    sp = sub.add_parser("compile-tm", help="compile a Turing machine to a program")
    sp.add_argument("machine")
    sp.add_argument("--clock", help="clock polynomial, e.g. \"x^2+3x+1\"")
    sp.add_argument("-o", "--output", help="output prefix (default: the machine file without suffix)")
    sp.add_argument("--verify", type=int, metavar="N",
                    help="compare with the simulator on all words of length <= N")
    sp.add_argument("--steps", type=int, default=100_000, help="simulator step limit")
    sp.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    common(sp)
    sp.set_defaults(handler=cmd_compile_tm)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"polyprog: {exc}", file=sys.stderr)
        return USAGE
    except (ProgramError, InterpSyntaxError, TMError, NotAValue, ValueError) as exc:
        print(f"polyprog: {exc}", file=sys.stderr)
        return UNCERTIFIED if isinstance(exc, NotAdditive) else INVALID
    except (StepLimit, FuelExhausted) as exc:
        print(f"polyprog: {exc}", file=sys.stderr)
        return EXHAUSTED


if __name__ == "__main__":
    sys.exit(main())

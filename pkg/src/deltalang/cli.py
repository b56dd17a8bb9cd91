"""``delta`` command-line entry point.

Exit codes: 0 success/fits/true verdict, 1 usage error, 2 parse or validation
error, 3 false verdict or bound violation, 4 runtime error, 5 step budget
exhausted.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import values as V
from .analysis import meter_fit, rank
from .errors import (
    BoundViolation, DeltaError, EvalError, MeterExceeded, ParseFailed, SemanticError,
    ValidationFailed, ValueSyntaxError,
)
from .evaluator import run_program, trace_dump
from .meter import default_budget
from .model import builtin_model, dump_signature
from .syntax import parse_program, validate_with_signature
from .syntax.ast import BoundDecl
from .transpiler import emit_text, transpile

EXIT_OK, EXIT_USAGE, EXIT_SYNTAX, EXIT_FALSE, EXIT_RUNTIME, EXIT_METER = 0, 1, 2, 3, 4, 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- argument helpers ------------------------------------------------------------------


def parse_binding(text: str):
    name, sep, raw = text.partition("=")
    if not sep or not name:
        raise UsageError(f"expected name=value, got {text!r}")
    try:
        return name, V.parse_value(raw)
    except ValueSyntaxError as exc:
        raise UsageError(f"bad value for {name!r}: {exc.message}") from None


def parse_bound(text: str) -> BoundDecl:
    c, sep, p = text.partition(",")
    try:
        C, P = Fraction(c.strip()), int(p)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected --bound C,p (e.g. 2,1 or 3/2,2), got {text!r}") from None
    if not sep or C <= 0 or P < 0:
        raise UsageError(f"expected --bound C,p with C > 0 and p >= 0, got {text!r}")
    return BoundDecl(C, P)


def parse_sizes(text: str) -> list:
    try:
        sizes = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated sizes, got {text!r}") from None
    if not sizes or any(s < 0 for s in sizes):
        raise UsageError("sizes must be a non-empty list of naturals")
    return sizes


def make_generator(specs, seed: int):
    """Build ``size -> bindings`` from ``name=kind`` specs.

    Kinds: ``size`` (the size itself), ``randint`` (uniform in [0, 2**size)),
    ``randlist`` (``size`` random ints in [0, 16)), or any canonical value
    (held constant).
    """
    parsed = []
    for spec in specs:
        name, sep, kind = spec.partition("=")
        if not sep or not name:
            raise UsageError(f"expected --gen name=kind, got {spec!r}")
        if kind in ("size", "randint", "randlist"):
            parsed.append((name, kind, None))
        else:
            parsed.append((name, "const", parse_binding(spec)[1]))

    def generate(size: int) -> list:
        rng = random.Random(seed * 1_000_003 + size)
        out = []
        for name, kind, const in parsed:
            if kind == "size":
                out.append((name, size))
            elif kind == "randint":
                out.append((name, rng.randrange(1 << size) if size else 0))
            elif kind == "randlist":
                out.append((name, V.ListVal(rng.randrange(16) for _ in range(size))))
            else:
                out.append((name, const))
        return out

    return generate


def load(path: str, inputs=None):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    sig = builtin_model()
    program = parse_program(text, str(path))
    resolved, _ = validate_with_signature(program, sig, inputs)
    return resolved, sig


def _format_bindings(pairs) -> str:
    return " ".join(f"{n}={V.dump(v)}" for n, v in pairs)


def _outputs(bindings, inputs) -> list:
    names = {n for n, _ in inputs}
    return [(n, v) for n, v in bindings if n not in names]


# -- commands -----------------------------------------------------------------------


def cmd_run(args, out) -> int:
    inputs = [parse_binding(b) for b in args.inputs]
    program, sig = load(args.source, [n for n, _ in inputs])
    res = run_program(program, sig, inputs, budget=args.budget)
    shown = _outputs(res.bindings, inputs)
    if args.format == "json":
        doc = {
            "verdict": res.verdict,
            "bindings": {n: V.dump(v) for n, v in shown},
            "steps": res.steps,
        }
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        line = f"verdict={'true' if res.verdict else 'false'}"
        if shown:
            line += " " + _format_bindings(shown)
        out.write(line + "\n")
    if args.trace_json:
        Path(args.trace_json).write_text(trace_dump(res.trace) + "\n", encoding="utf-8")
    return EXIT_OK if res.verdict else EXIT_FALSE


def cmd_check(args, out) -> int:
    p = Path(args.source)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.source}: {exc.strerror}") from None
    _, extended = validate_with_signature(parse_program(text, str(p)), builtin_model())
    if args.dump_signature:
        out.write(dump_signature(extended))
    out.write(f"ok {args.source}\n")
    return EXIT_OK


def cmd_rank(args, out) -> int:
    program, sig = load(args.source)
    result = rank(program, sig)
    if args.format == "json":
        items = [
            {"node": type(node).__name__, "rank": r,
             "line": node.span.line if getattr(node, "span", None) else None,
             "column": node.span.column if getattr(node, "span", None) else None}
            for node, r in result.per_node.items()
            if getattr(node, "span", None) is not None
        ]
        items.sort(key=lambda d: (d["line"], d["column"], -d["rank"], d["node"]))
        out.write(json.dumps({"rank": result.rank, "nodes": items}, sort_keys=True) + "\n")
    else:
        out.write(f"{result.rank}\n")
    return EXIT_OK


def cmd_meter(args, out) -> int:
    decl = parse_bound(args.bound)
    sizes = parse_sizes(args.sizes)
    gen = make_generator(args.gen, args.seed)
    program, sig = load(args.source, [n for n, _ in gen(0)])
    cert = meter_fit(program, sig, gen, sizes, decl)
    out.write(cert.render_json() if args.format == "json" else cert.render_text())
    return {"fits": EXIT_OK, "violated": EXIT_FALSE}.get(cert.verdict, EXIT_RUNTIME)


def cmd_transpile(args, out) -> int:
    program, sig = load(args.source)
    text = emit_text(transpile(program, sig))
    if args.output == "-":
        out.write(text)
        return EXIT_OK
    dest = Path(args.output) if args.output else Path(args.source).with_suffix(".dir")
    dest.write_text(text, encoding="utf-8")
    out.write(f"wrote {dest}\n")
    return EXIT_OK


def cmd_trace(args, out) -> int:
    inputs = [parse_binding(b) for b in args.inputs]
    program, sig = load(args.source, [n for n, _ in inputs])
    events = []
    try:
        res = run_program(program, sig, inputs, budget=args.budget, sink=events.append)
    finally:
        for ev in events:
            if args.format == "json":
                out.write(json.dumps(ev.to_json(), sort_keys=True) + "\n")
            else:
                where = ev.span.render() if ev.span is not None else "-"
                changes = " ".join(f"{k}={v}" for k, v in ev.set.items())
                unset = " ".join(f"-{k}" for k in ev.unset)
                tail = " ".join(x for x in (changes, unset) if x)
                out.write(
                    f"[{ev.steps}] rule {ev.rule} {ev.node} @ {where} depth {ev.depth_before}->{ev.depth_after}"
                    + (f" {tail}" if tail else "") + "\n"
                )
    out.write(f"verdict={'true' if res.verdict else 'false'} steps={res.steps}\n")
    return EXIT_OK if res.verdict else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="delta", description="Delta logic programming toolchain")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, inputs=False):
        sp.add_argument("source", help="Delta source file")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        if inputs:
            sp.add_argument("--in", dest="inputs", action="append", default=[], metavar="NAME=VALUE",
                            help="initial binding in canonical value syntax (repeatable)")
            sp.add_argument("--budget", type=int, default=None, help="step budget (default $DELTA_BUDGET or 10^7)")

    sp = sub.add_parser("run", help="evaluate a program")
    common(sp, inputs=True)
    sp.add_argument("--trace-json", default=None, metavar="PATH", help="write the final trace value here")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("check", help="parse and validate")
    common(sp)
    sp.add_argument("--dump-signature", action="store_true", help="print the signature after declarations")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("rank", help="print the rank of a program")
    common(sp)
    sp.set_defaults(func=cmd_rank)

    sp = sub.add_parser("meter", help="check a declared (C, p) bound empirically")
    common(sp)
    sp.add_argument("--bound", required=True, metavar="C,p")
    sp.add_argument("--sizes", default="8,16,32,64")
    sp.add_argument("--gen", action="append", default=[], metavar="NAME=KIND",
                    help="input generator: size, randint, randlist or a constant value (repeatable)")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_meter)

    sp = sub.add_parser("transpile", help="compile to the bounded IR")
    common(sp)
    sp.add_argument("--emit", choices=("ir",), default="ir")
    sp.add_argument("-o", "--output", default=None, help="output path; '-' for stdout (default: SOURCE.dir)")
    sp.set_defaults(func=cmd_transpile)

    sp = sub.add_parser("trace", help="print the evaluation step log")
    common(sp, inputs=True)
    sp.set_defaults(func=cmd_trace)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "budget", None) is None and hasattr(args, "budget"):
            args.budget = default_budget()
        if getattr(args, "budget", None) is not None and args.budget <= 0:
            raise UsageError("--budget must be positive")
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"delta: error: {exc}\n")
        return EXIT_USAGE
    except (ParseFailed, ValidationFailed) as exc:
        for e in exc.errors:
            err.write(e.render() + "\n")
        return EXIT_SYNTAX
    except SemanticError as exc:
        err.write(exc.render() + "\n")
        return EXIT_SYNTAX
    except MeterExceeded as exc:
        err.write(exc.render() + "\n")
        return EXIT_METER
    except BoundViolation as exc:
        err.write(exc.render() + "\n")
        return EXIT_FALSE
    except (EvalError, DeltaError) as exc:
        err.write(exc.render() + "\n")
        return EXIT_RUNTIME
    except ValueError as exc:
        err.write(f"delta: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

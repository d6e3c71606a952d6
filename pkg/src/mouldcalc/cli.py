"""Command line front end.

    mouldcalc linearize --input spec.json [--order N] [--basis word|forest] [--scalar exact|diag]
    mouldcalc algebra --query coproduct|arborify|antipode|gl-product|symmetry --input obj.json
    mouldcalc enumerate --decorations decos.json --max-grade N [--ck-plus]
    mouldcalc growth --input spec.json --max-grade N [--decorations decos.json]

Exit status: 0 success, 1 usage or parse error, 2 resonance, 3 failed internal check.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import io, trees, words
from .arborification import arborify
from .core import InvariantViolation, Resonance, ZeroMultiplier
from .linearizer import growth_report, linearize

EXIT_OK, EXIT_USAGE, EXIT_RESONANCE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read_json(path: str | None):
    if path is None:
        raise UsageError("--input is required")
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _write(doc, path: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=False)
    if path is None or path == "-":
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def cmd_linearize(args) -> int:
    spec = io.spec_from_json(_read_json(args.input))
    result = linearize(spec, args.basis, args.order, args.scalar)
    _write(io.result_to_json(result), args.output)
    if not result.residual_zero:
        raise InvariantViolation(f"nonzero residual from degree {result.residual_min_degree}")
    return EXIT_OK


def cmd_algebra(args) -> int:
    data = _read_json(args.input)
    q = args.query
    if q == "gl-product":
        if not isinstance(data, dict) or "left" not in data or "right" not in data:
            raise UsageError('gl-product expects {"left": forest, "right": forest}')
        left = io.forest_from_json(data["left"])
        right = io.forest_from_json(data["right"])
        out = {"query": q, "terms": io.lincomb_to_json(trees.gl_product(left, right))}
        _write(out, args.output)
        return EXIT_OK
    kind, x = io.element_from_json(data, args.kind)
    if q == "coproduct":
        terms = words.deconcat(x) if kind == "word" else trees.coproduct(x)
        out = {"query": q, "terms": io.tensor_to_json(terms)}
    elif q == "arborify":
        if kind != "forest":
            raise UsageError("arborify takes a forest")
        out = {"query": q, "mode": args.mode, "terms": io.lincomb_to_json(arborify(x, args.mode))}
    elif q == "antipode":
        if kind == "word":
            s = words.antipode_sh(x) if args.mode == "sh" else words.antipode_qsh(x)
        else:
            s = trees.antipode(x)
        out = {"query": q, "terms": io.lincomb_to_json(s)}
    elif q == "symmetry":
        if kind != "forest":
            raise UsageError("symmetry takes a forest")
        out = {"query": q, "value": trees.symmetry_factor(x)}
    else:  # argparse restricts the choices
        raise UsageError(f"unknown query {q!r}")
    _write(out, args.output)
    return EXIT_OK


def _read_decorations(path: str | None) -> list:
    data = _read_json(path)
    if not isinstance(data, list) or not all(isinstance(d, list) for d in data):
        raise UsageError("decorations file must hold a list of integer lists")
    return [tuple(int(n) for n in d) for d in data]


def cmd_enumerate(args) -> int:
    if args.max_grade is None:
        raise UsageError("--max-grade is required")
    decos = _read_decorations(args.decorations)
    out = sys.stdout if args.output in (None, "-") else open(args.output, "w")
    try:
        for f in trees.enumerate_forests(decos, args.max_grade, plus_only=args.ck_plus):
            line = {"forest": io.forest_to_json(f), "grade": f.grade, "ck_plus": trees.in_ck_plus(f),
                    "symmetry": trees.symmetry_factor(f)}
            out.write(json.dumps(line) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_growth(args) -> int:
    spec = io.spec_from_json(_read_json(args.input))
    N = args.max_grade if args.max_grade is not None else spec.order
    decos = _read_decorations(args.decorations) if args.decorations else None
    report = growth_report(spec, N, decos)
    _write(io.growth_to_json(report), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mouldcalc", description="Mould calculus and formal linearization.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    lin = sub.add_parser("linearize", help="normalizing map of a field or diffeomorphism")
    lin.add_argument("--input", required=True)
    lin.add_argument("--output")
    lin.add_argument("--order", type=int)
    lin.add_argument("--basis", choices=("word", "forest"), default="forest")
    lin.add_argument("--scalar", choices=("exact", "diag"), default="exact")
    lin.set_defaults(func=cmd_linearize)

    alg = sub.add_parser("algebra", help="Hopf algebra queries on one word or forest")
    alg.add_argument("--query", required=True,
                     choices=("coproduct", "arborify", "antipode", "gl-product", "symmetry"))
    alg.add_argument("--input", required=True)
    alg.add_argument("--output")
    alg.add_argument("--mode", choices=("sh", "qsh"), default="sh")
    alg.add_argument("--kind", choices=("word", "forest"))
    alg.set_defaults(func=cmd_algebra)

    en = sub.add_parser("enumerate", help="stream canonical forests as JSON lines")
    en.add_argument("--decorations", required=True)
    en.add_argument("--max-grade", type=int, required=True)
    en.add_argument("--ck-plus", action="store_true")
    en.add_argument("--output")
    en.set_defaults(func=cmd_enumerate)

    gr = sub.add_parser("growth", help="growth and slice-count diagnostics")
    gr.add_argument("--input", required=True)
    gr.add_argument("--max-grade", type=int)
    gr.add_argument("--decorations")
    gr.add_argument("--output")
    gr.set_defaults(func=cmd_growth)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Resonance as exc:
        print(f"resonance: weight {list(exc.weight)}", file=sys.stderr)
        return EXIT_RESONANCE
    except (UsageError, ValueError, ZeroMultiplier) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

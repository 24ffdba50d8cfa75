"""Command-line entry point: ``verba <command> ...``.

Exit codes: 0 success, 2 lexical/syntax error, 3 semantic error,
4 verification refuted, 5 I/O or format error, 1 failed step invariant.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .grammar import Grammar, GrammarError, LexicalError, ParseError, Parser, render_tree
from .render import RenderSpec, shape_svg, write_report
from .rules import REFUTED, RuleError, StepInvariantError, derive, load_rules, verify_sentence
from .semantics import (
    STYLES, SemanticError, convert_style, dumps, interpret, paper_style, serialize,
)
from .shapes import MatchOptions, ShapeError, load_shape

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_SYNTAX = 2
EXIT_SEMANTIC = 3
EXIT_REFUTED = 4
EXIT_IO = 5


def _parser(args) -> Parser:
    grammar = Grammar.load(args.grammar) if getattr(args, "grammar", None) else Grammar.builtin()
    return Parser(grammar)


def cmd_parse(args) -> int:
    p = _parser(args)
    trees = p.parse(p.tokenize(args.sentence))
    for t in trees if args.all else trees[:1]:
        print(render_tree(t))
    return EXIT_OK


def cmd_interpret(args) -> int:
    p = _parser(args)
    sem = interpret(p.parse(p.tokenize(args.sentence))[0], p.grammar)
    if args.paper_style:
        print(paper_style(sem))
    elif args.json:
        print(dumps(sem))
    else:
        print(serialize(sem))
    return EXIT_OK


def cmd_convert(args) -> int:
    print(convert_style(args.sentence, args.to, verb=args.verb, parser=_parser(args)))
    return EXIT_OK


def _seed(args) -> int | None:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("VERBA_SEED")
    return int(env) if env else None


def cmd_derive(args) -> int:
    pairs = load_rules(args.rules)
    initial = load_shape(args.init)
    script = None
    if args.script:
        with open(args.script, encoding="utf-8") as fh:
            script = [(str(name), int(k)) for name, k in json.load(fh)]
    d = derive(
        pairs, initial,
        strategy=args.strategy, max_steps=args.steps, seed=_seed(args), script=script,
        opts=MatchOptions(allow_reflection=not args.no_reflection),
    )
    write_report(d, args.out)
    print(f"{len(d.steps)} step(s), termination: {d.termination}; report in {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    binding = {"shape1": load_shape(args.shape1), "shape2": load_shape(args.shape2)}
    v = verify_sentence(args.sentence, binding)
    rel = v.relation.value if v.relation else "-"
    print(f"{v.status} relation={rel}{' coarse' if v.coarse else ''}: {v.detail}")
    return EXIT_REFUTED if v.status == REFUTED else EXIT_OK


def cmd_render(args) -> int:
    svg = shape_svg(load_shape(args.shape), RenderSpec(stroke_width=args.stroke_width))
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="verba", description="Shape rules, verbal rules and spatial semantics.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="print the parse tree of a description sentence")
    p.add_argument("sentence")
    p.add_argument("--all", action="store_true", help="print every parse, not just the preferred one")
    p.add_argument("--grammar", help="grammar file (LHS -> RHS ... @tag per line)")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("interpret", help="print the spatial-semantic structure of a sentence")
    p.add_argument("sentence")
    p.add_argument("--paper-style", action="store_true", help="positional bracket form")
    p.add_argument("--json", action="store_true")
    p.add_argument("--grammar")
    p.set_defaults(func=cmd_interpret)

    p = sub.add_parser("convert", help="convert between constructive and from-above styles")
    p.add_argument("sentence")
    p.add_argument("--to", required=True, choices=STYLES)
    p.add_argument("--verb", default="draw", help="action verb for constructive output")
    p.add_argument("--grammar")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("derive", help="run a joint shape/verbal derivation and write a report")
    p.add_argument("--rules", required=True)
    p.add_argument("--init", required=True)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--strategy", default="first", choices=("first", "random", "interactive-script"))
    p.add_argument("--seed", type=int)
    p.add_argument("--script", help="JSON list of [rule name, match index] choices")
    p.add_argument("--no-reflection", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("verify", help="check a sentence's spatial relation against two shapes")
    p.add_argument("--sentence", required=True)
    p.add_argument("--shape1", required=True)
    p.add_argument("--shape2", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="draw a shape file as SVG")
    p.add_argument("--shape", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--stroke-width", type=float, default=2.0)
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (LexicalError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SYNTAX
    except StepInvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (OSError, json.JSONDecodeError, ShapeError, RuleError, GrammarError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SemanticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())

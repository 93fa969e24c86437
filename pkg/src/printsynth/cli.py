"""Terminal entry point: interactive prompt, scripted runs, test-set dumps,
benchmark rows, and API serving."""

from __future__ import annotations

import argparse
import json
import sys
import time

from .adt import (
    AdtError,
    Domain,
    desugar_primitives,
    domain_of,
    gen_lower_bound_domain,
    parse_adt,
    standin_sample,
)
from .engine import (
    EngineConfig,
    InconsistentAnswerError,
    InferenceState,
    Sample,
    emit_code,
)
from .testsets import tree_test_set
from .transducer import OneSTS

HTML_BENCH = """
abstract class Node
case class node(t: Tag, l: List) extends Node
abstract class Tag
case class div() extends Tag
case class pre() extends Tag
case class span() extends Tag
abstract class List
case class cons(n: Node, l: List) extends List
case class nil() extends List
"""

BINARY_BENCH = """
abstract class Number
case class Empty() extends Number
case class Zero(n: Number) extends Number
case class One(n: Number) extends Number
"""

GRAMMAR_BENCH = """
abstract class Char
case class a() extends Char
case class b() extends Char
abstract class CharList
case class NilChar() extends CharList
case class ConsChar(c: Char, l: CharList) extends CharList
abstract class Symbol
case class Terminal(t: Char) extends Symbol
case class NonTerminal(s: CharList) extends Symbol
case class Rule(lhs: NonTerminal, rhs: ListSymbol)
abstract class ListRule
case class ConsRule(r: Rule, tail: ListRule) extends ListRule
case class NilRule() extends ListRule
abstract class ListSymbol
case class ConsSymbol(s: Symbol, tail: ListSymbol) extends ListSymbol
case class NilSymbol() extends ListSymbol
case class Grammar(s: NonTerminal, r: ListRule)
"""


def _bench_domain(family: str, n: int) -> tuple[Domain, OneSTS | None]:
    """Built-in benchmark families with their reference printers."""
    if family == "lower-bound":
        domain = gen_lower_bound_domain(n)
        import random

        rng = random.Random(n * 7919 + 13)
        from .transducer import AnnotatedLetter, sts_of

        mu = {
            AnnotatedLetter(sym, i): "".join(
                rng.choice("pq") for _ in range(rng.randint(0, 2))
            )
            for sym in domain.symbols
            for i in range(sym.arity + 1)
        }
        return domain, sts_of(mu)
    sources = {"binary": BINARY_BENCH, "html": HTML_BENCH, "grammar": GRAMMAR_BENCH}
    if family not in sources:
        raise SystemExit(f"unknown bench family {family!r} (choose from "
                         f"lower-bound, binary, html, grammar)")
    domain = domain_of(parse_adt(sources[family]))
    s = {sym.name: sym for sym in domain.symbols}
    if family == "binary":
        table = {s["Empty"]: ("",), s["Zero"]: ("0", ""), s["One"]: ("1", "")}
    elif family == "html":
        table = {
            s["node"]: ("<.", "", ""),
            s["div"]: ("div",),
            s["pre"]: ("pre",),
            s["span"]: ("span",),
            s["cons"]: ("(", ")", ""),
            s["nil"]: ("",),
        }
    else:
        table = {
            s["a"]: ("a",),
            s["b"]: ("b",),
            s["NilChar"]: ("",),
            s["ConsChar"]: ("", "", ""),
            s["Terminal"]: ("", ""),
            s["NonTerminal"]: ("N", ""),
            s["Rule"]: ("", " ->", ""),
            s["ConsRule"]: ("\n", "", ""),
            s["NilRule"]: ("",),
            s["ConsSymbol"]: (" ", "", ""),
            s["NilSymbol"]: ("",),
            s["Grammar"]: ("Start: ", "", ""),
        }
    return domain, OneSTS.from_dict(table)


def _load_domain(args) -> tuple:
    if args.bench:
        family, n = args.bench
        domain, tau = _bench_domain(family, int(n))
        return domain, None, tau
    if not args.input:
        raise SystemExit("an ADT input file is required (or use --bench)")
    try:
        source = open(args.input, encoding="utf-8").read()
    except OSError as err:
        raise SystemExit(f"cannot read {args.input}: {err}")
    try:
        decl = desugar_primitives(parse_adt(source))
        domain = domain_of(decl)
    except AdtError as err:
        raise SystemExit(f"invalid ADT: {err}")
    return domain, decl, None


def _read_answer_interactive() -> str:
    """Read one answer; a trailing backslash continues onto the next line."""
    parts = []
    while True:
        line = input()
        if line.endswith("\\"):
            parts.append(line[:-1])
            continue
        parts.append(line)
        break
    return "\n".join(parts)


def run_interactive(domain, decl, args) -> int:
    config = EngineConfig(
        max_suggestions=args.suggestions,
        presets=standin_sample(decl, domain) if decl else {},
    )
    state = InferenceState(domain, config)
    print("Proactive Synthesis.")
    print("If you ever want to enter a new line, terminate your line by \\ "
          "and press Enter.")
    first = True
    while True:
        question = state.next_question()
        if question is None:
            break
        if question.tree.size > 1 or first:
            print("What should be the function output for the following input tree?")
            print(question.rendered)
        else:
            print(f"{question.rendered} ?")
        first = False
        if question.hint:
            print(f"Something of the form: {question.hint}")
        if question.suggestions:
            for i, word in enumerate(question.suggestions, start=1):
                print(f"{i}) " + word.replace("\n", "\\n"))
            print(
                f"Please enter a number between 1 and {len(question.suggestions)}, "
                f"or 0 if you really want to enter your answer manually"
            )
            raw = _read_answer_interactive()
            choice = raw.strip()
            if choice.isdigit() and 0 < int(choice) <= len(question.suggestions):
                answer = question.suggestions[int(choice) - 1]
            else:
                answer = _read_answer_interactive() if choice == "0" else raw
        else:
            answer = _read_answer_interactive()
        try:
            state.answer_current(answer)
        except InconsistentAnswerError as err:
            print(err)
    return _emit_and_report(state, decl, args)


def run_scripted(domain, decl, tau_ref, args) -> int:
    answers = None
    if args.answers:
        with open(args.answers, encoding="utf-8") as handle:
            answers = json.load(handle)
    presets = standin_sample(decl, domain) if decl else {}
    state = InferenceState(
        domain, EngineConfig(max_suggestions=args.suggestions, presets=presets)
    )
    while True:
        question = state.next_question()
        if question is None:
            break
        if answers is not None:
            if question.rendered not in answers:
                print(f"no scripted answer for {question.rendered}", file=sys.stderr)
                return 1
            answer = answers[question.rendered]
        else:
            answer = tau_ref(question.tree)
        try:
            state.answer_current(answer)
        except InconsistentAnswerError as err:
            print(f"inconsistent scripted answer: {err}", file=sys.stderr)
            return 1
    return _emit_and_report(state, decl, args)


def _emit_and_report(state, decl, args) -> int:
    tau = state.result()
    stats = state.stats()
    print(
        f"test set: {stats['testset_size']}\n"
        f"inferred: {stats['inferred']}\n"
        f"asked: {stats['asked']} "
        f"(nothing: {stats['asked_nothing']}, hint: {stats['asked_hint']}, "
        f"suggestions: {stats['asked_suggestions']})"
    )
    if decl is not None:
        asked = Sample()
        for tree, word in state.asked.items():
            asked.record(tree, word)
        code = emit_code(tau, asked, decl)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as handle:
                handle.write(code)
        else:
            print(code, end="")
    return 0


def run_dump_testset(domain) -> int:
    trees = tree_test_set(domain)
    for tree in trees:
        print(tree.text())
    print(f"size: {len(trees)}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="printsynth",
        description="Synthesize a recursive tree-to-string printer for an ADT "
        "by answering (few) questions.",
    )
    parser.add_argument("input", nargs="?", help="ADT declaration file")
    parser.add_argument("--suggestions", type=int, default=9, metavar="N",
                        help="max multiple-choice suggestions per question (default 9)")
    parser.add_argument("--answers", metavar="FILE",
                        help="scripted answers: JSON object mapping tree text to output")
    parser.add_argument("--out", metavar="FILE", help="write the emitted printer here")
    parser.add_argument("--serve", type=int, metavar="PORT",
                        help="start the HTTP session API")
    parser.add_argument("--bench", nargs=2, metavar=("FAMILY", "N"),
                        help="built-in benchmark family: lower-bound, binary, html, grammar")
    parser.add_argument("--dump-testset", action="store_true",
                        help="print the tree test set, one tree per line")
    parser.add_argument("--no-timing", action="store_true",
                        help="suppress the trailing runtime line")
    args = parser.parse_args(argv)
    if args.suggestions < 0:
        parser.error("--suggestions must be >= 0")

    started = time.monotonic()
    try:
        if args.serve is not None:
            from .server import serve

            serve(args.serve)
            return 0
        domain, decl, tau_ref = _load_domain(args)
        if args.dump_testset:
            status = run_dump_testset(domain)
        elif args.bench or args.answers:
            status = run_scripted(domain, decl, tau_ref, args)
        else:
            status = run_interactive(domain, decl, args)
    except KeyboardInterrupt:
        return 130
    except EOFError:
        print("input ended before the session finished", file=sys.stderr)
        return 1
    if not args.no_timing:
        print(f"completed in {time.monotonic() - started:.3f}s", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())

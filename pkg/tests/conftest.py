import pytest

from printsynth.adt import RankedSymbol, Tree, domain_of, parse_adt
from printsynth.transducer import OneSTS

HTML_SOURCE = """
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

GRAMMAR_SOURCE = """
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

BINARY_SOURCE = """
abstract class Number
case class Empty() extends Number
case class Zero(n: Number) extends Number
case class One(n: Number) extends Number
"""


@pytest.fixture(scope="session")
def html_domain():
    return domain_of(parse_adt(HTML_SOURCE))


@pytest.fixture(scope="session")
def grammar_domain():
    return domain_of(parse_adt(GRAMMAR_SOURCE))


@pytest.fixture(scope="session")
def binary_domain():
    return domain_of(parse_adt(BINARY_SOURCE))


def html_symbols(domain):
    return {s.name: s for s in domain.symbols}


def html_transducer(domain) -> OneSTS:
    """The templating-engine printer: node -> "<." t l, cons -> "(" n ")" l."""
    s = html_symbols(domain)
    return OneSTS.from_dict(
        {
            s["node"]: ("<.", "", ""),
            s["div"]: ("div",),
            s["pre"]: ("pre",),
            s["span"]: ("span",),
            s["cons"]: ("(", ")", ""),
            s["nil"]: ("",),
        }
    )


def html_transducer_swapped(domain) -> OneSTS:
    """Same printer with the last two cons constants switched; only a
    two-element list distinguishes it from the original."""
    s = html_symbols(domain)
    return OneSTS.from_dict(
        {
            s["node"]: ("<.", "", ""),
            s["div"]: ("div",),
            s["pre"]: ("pre",),
            s["span"]: ("span",),
            s["cons"]: ("(", "", ")"),
            s["nil"]: ("",),
        }
    )


def grammar_transducer(domain) -> OneSTS:
    """The reference printer behind the walkthrough dialog."""
    s = {sym.name: sym for sym in domain.symbols}
    return OneSTS.from_dict(
        {
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
    )


def t(symbol: RankedSymbol, *children: Tree) -> Tree:
    return Tree(symbol, tuple(children))

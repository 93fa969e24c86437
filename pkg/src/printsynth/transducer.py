"""Single-state sequential tree-to-string transducers and their morphism view.

A transducer assigns to every symbol of arity k a tuple of k+1 constant
words; printing interleaves the constants with the recursively printed
children.  Encoding a tree with the default transducer (whose constants are
the annotated letters themselves) gives a word that determines the tree
uniquely, which turns transducer questions into word-morphism questions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .adt import Domain, RankedSymbol, Tree
from .cfg import Cfg, CfgRule, Nt


class TransducerError(Exception):
    pass


class DecodeError(TransducerError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class AnnotatedLetter:
    """The i-th constant slot of a symbol; the letters (f,0)..(f,k) form the
    alphabet that encoded trees are written in and double as the unknowns of
    the word equations."""

    symbol: RankedSymbol
    index: int

    def __post_init__(self):
        if not 0 <= self.index <= self.symbol.arity:
            raise ValueError(f"index {self.index} out of range for {self.symbol}")

    def __repr__(self):
        return f"({self.symbol.name},{self.index})"


def letters_of(symbol: RankedSymbol) -> tuple[AnnotatedLetter, ...]:
    return tuple(AnnotatedLetter(symbol, i) for i in range(symbol.arity + 1))


def default_encode(t: Tree) -> tuple[AnnotatedLetter, ...]:
    """(f,0) enc(t1) (f,1) ... enc(tk) (f,k)."""
    if t.root.is_string_leaf:
        raise TransducerError("string-leaf trees have no default encoding")
    out: list[AnnotatedLetter] = []

    def walk(node: Tree):
        out.append(AnnotatedLetter(node.root, 0))
        for i, child in enumerate(node.children, start=1):
            walk(child)
            out.append(AnnotatedLetter(node.root, i))

    walk(t)
    return tuple(out)


def decode_tree(word) -> Tree:
    """The unique tree whose default encoding is ``word``.

    Raises DecodeError with the offending position for words that encode no
    tree (wrong opening letter, unexpected closing index, trailing letters).
    """
    word = tuple(word)
    pos = 0

    def parse() -> Tree:
        nonlocal pos
        if pos >= len(word) or word[pos].index != 0:
            raise DecodeError("expected an opening letter (f,0)", pos)
        f = word[pos].symbol
        pos += 1
        children = []
        for i in range(1, f.arity + 1):
            children.append(parse())
            if pos >= len(word) or word[pos] != AnnotatedLetter(f, i):
                raise DecodeError(f"expected ({f.name},{i})", pos)
            pos += 1
        return Tree(f, tuple(children))

    tree = parse()
    if pos != len(word):
        raise DecodeError("trailing letters after a complete tree", pos)
    return tree


@dataclass(frozen=True)
class OneSTS:
    """Constant table of a single-state sequential transducer.

    Calling the transducer on a tree yields the printed word; string-leaf
    nodes print their raw value.
    """

    table: tuple[tuple[RankedSymbol, tuple[str, ...]], ...]

    @staticmethod
    def from_dict(table: dict[RankedSymbol, tuple[str, ...]]) -> OneSTS:
        return OneSTS(tuple(table.items()))

    def __post_init__(self):
        for sym, consts in self.table:
            if len(consts) != sym.arity + 1:
                raise TransducerError(
                    f"{sym.name} needs {sym.arity + 1} constants, got {len(consts)}"
                )

    @cached_property
    def constants(self) -> dict[RankedSymbol, tuple[str, ...]]:
        return dict(self.table)

    @cached_property
    def gamma(self) -> set[str]:
        return {ch for _, consts in self.table for w in consts for ch in w}

    def __call__(self, t: Tree) -> str:
        if t.root.is_string_leaf:
            return t.leaf_value or ""
        consts = self.constants.get(t.root)
        if consts is None:
            raise TransducerError(f"unknown symbol {t.root.name}")
        parts = [consts[0]]
        for i, child in enumerate(t.children, start=1):
            parts.append(self(child))
            parts.append(consts[i])
        return "".join(parts)


Morphism = dict  # AnnotatedLetter -> word over the output alphabet


def morph_of(tau: OneSTS) -> Morphism:
    """The morphism sending the letter (f,i) to the i-th constant of f."""
    return {
        AnnotatedLetter(sym, i): consts[i]
        for sym, consts in tau.table
        for i in range(sym.arity + 1)
    }


def sts_of(mu: Morphism) -> OneSTS:
    """Inverse of morph_of; ``mu`` must cover every slot of each symbol."""
    by_symbol: dict[RankedSymbol, dict[int, str]] = {}
    for letter, word in mu.items():
        by_symbol.setdefault(letter.symbol, {})[letter.index] = word
    table = {}
    for sym, slots in by_symbol.items():
        if set(slots) != set(range(sym.arity + 1)):
            raise TransducerError(f"morphism is partial on {sym.name}")
        table[sym] = tuple(slots[i] for i in range(sym.arity + 1))
    return OneSTS.from_dict(table)


def apply_morphism(mu: Morphism, word) -> str:
    return "".join(mu[letter] for letter in word)


def domain_to_grammar(domain: Domain) -> Cfg:
    """Context-free grammar of the default encodings of the domain's trees.

    One nonterminal per state plus a fresh start; start rules first (one per
    initial state), then one body rule per transition, in declaration order.
    """
    start = "S_G"
    while start in domain.states:
        start += "_"
    rules = [CfgRule(start, (Nt(f"A_{q}"),)) for q in domain.initial]
    for tr in domain.transitions:
        rhs: list = [AnnotatedLetter(tr.symbol, 0)]
        for i, q in enumerate(tr.child_states, start=1):
            rhs.append(Nt(f"A_{q}"))
            rhs.append(AnnotatedLetter(tr.symbol, i))
        rules.append(CfgRule(f"A_{tr.state}", tuple(rhs)))
    nonterminals = (start,) + tuple(f"A_{q}" for q in domain.states)
    return Cfg(nonterminals, tuple(rules), start)

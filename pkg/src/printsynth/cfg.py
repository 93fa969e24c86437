"""Context-free grammars with a fixed total order on rules.

Terminals are arbitrary hashable objects; nonterminal occurrences in rule
bodies are wrapped in ``Nt`` so they can never collide with terminals.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property


@dataclass(frozen=True)
class Nt:
    name: str

    def __repr__(self):
        return f"<{self.name}>"


@dataclass(frozen=True)
class CfgRule:
    lhs: str
    rhs: tuple  # mix of Nt and terminal objects

    def nonterminals(self) -> list[str]:
        return [x.name for x in self.rhs if isinstance(x, Nt)]

    def __repr__(self):
        return f"{self.lhs} -> {' '.join(map(repr, self.rhs))}"


@dataclass(frozen=True)
class Cfg:
    """Rule order is declaration order: rules[i] has index i."""

    nonterminals: tuple[str, ...]
    rules: tuple[CfgRule, ...]
    start: str

    def __post_init__(self):
        declared = set(self.nonterminals)
        if self.start not in declared:
            raise ValueError(f"start symbol {self.start} undeclared")
        for r in self.rules:
            if r.lhs not in declared:
                raise ValueError(f"rule lhs {r.lhs} undeclared")
            for nt in r.nonterminals():
                if nt not in declared:
                    raise ValueError(f"rule rhs nonterminal {nt} undeclared")

    @property
    def size(self) -> int:
        """|G| = sum over rules of (1 + |rhs|)."""
        return sum(1 + len(r.rhs) for r in self.rules)

    @cached_property
    def by_lhs(self) -> dict[str, list[tuple[int, CfgRule]]]:
        out: dict[str, list[tuple[int, CfgRule]]] = {n: [] for n in self.nonterminals}
        for i, r in enumerate(self.rules):
            out[r.lhs].append((i, r))
        return out

    def is_linear(self) -> bool:
        return all(len(r.nonterminals()) <= 1 for r in self.rules)

    def terminals(self) -> set:
        return {x for r in self.rules for x in r.rhs if not isinstance(x, Nt)}


def language(grammar: Cfg, max_words: int = 100_000, max_len: int = 50) -> set[tuple]:
    """Exhaustive language enumeration for small grammars (test oracle).

    Expands sentential forms breadth-first; raises if the language appears to
    exceed the requested bounds.
    """
    words: set[tuple] = set()
    frontier = [(Nt(grammar.start),)]
    seen = {frontier[0]}
    steps = 0
    while frontier:
        steps += 1
        if steps > 5_000_000:
            raise RuntimeError("language enumeration did not converge")
        form = frontier.pop()
        idx = next((i for i, x in enumerate(form) if isinstance(x, Nt)), None)
        if idx is None:
            if len(form) <= max_len:
                words.add(form)
                if len(words) > max_words:
                    raise RuntimeError("language enumeration exceeded max_words")
            continue
        if sum(1 for x in form if not isinstance(x, Nt)) > max_len:
            continue
        for _, rule in grammar.by_lhs[form[idx].name]:
            new = form[:idx] + rule.rhs + form[idx + 1:]
            if new not in seen:
                seen.add(new)
                frontier.append(new)
    return words

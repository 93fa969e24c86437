"""Ranked alphabets, trees, tree-automaton domains, and the ADT input language.

A domain is a top-down tree automaton describing which trees a printer must
handle.  Domains are built from case-class declarations written in a small
Scala-like syntax, after primitive-typed fields have been replaced by
two-constructor stand-in classes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property


class AdtError(Exception):
    """Base class for declaration and domain construction errors."""


class AdtParseError(AdtError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DomainError(AdtError):
    pass


@dataclass(frozen=True, eq=False)
class RankedSymbol:
    """A constructor symbol with a fixed arity.

    ``display_name`` is the original constructor name, kept for code
    generation; it defaults to ``name``.
    """

    name: str
    arity: int
    display_name: str = ""
    is_string_leaf: bool = False

    def __post_init__(self):
        if self.arity < 0:
            raise ValueError(f"negative arity for {self.name}")
        if not self.display_name:
            object.__setattr__(self, "display_name", self.name)

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.name, self.arity, self.display_name, self.is_string_leaf))
            self.__dict__["_hash"] = h
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, RankedSymbol):
            return NotImplemented
        return (
            self.name == other.name
            and self.arity == other.arity
            and self.display_name == other.display_name
            and self.is_string_leaf == other.is_string_leaf
        )

    def __repr__(self):
        return f"{self.name}^{self.arity}"


@dataclass(frozen=True, eq=False)
class Tree:
    """A term over ranked symbols.

    ``leaf_value`` holds the raw string carried by a string-leaf node and is
    only allowed on the designated string-leaf symbol (arity 0).  Equality
    is structural; the hash is cached, trees being immutable.
    """

    root: RankedSymbol
    children: tuple[Tree, ...] = ()
    leaf_value: str | None = None

    def __post_init__(self):
        if len(self.children) != self.root.arity:
            raise ValueError(
                f"{self.root.name} expects {self.root.arity} children, "
                f"got {len(self.children)}"
            )
        if (self.leaf_value is not None) != self.root.is_string_leaf:
            raise ValueError(f"leaf_value mismatch on {self.root.name}")

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.root, self.children, self.leaf_value))
            self.__dict__["_hash"] = h
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Tree):
            return NotImplemented
        if hash(self) != hash(other):
            return False
        return (
            self.root == other.root
            and self.leaf_value == other.leaf_value
            and self.children == other.children
        )

    @cached_property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)

    @cached_property
    def depth(self) -> int:
        return 1 + max((c.depth for c in self.children), default=0)

    def subtrees(self):
        """All subtrees, this tree included, deepest first."""
        for c in self.children:
            yield from c.subtrees()
        yield self

    def text(self) -> str:
        """Constructor syntax; nullary constructors print bare."""
        if self.root.is_string_leaf:
            return f'{self.root.display_name}("{self.leaf_value}")'
        if not self.children:
            return self.root.display_name
        return f"{self.root.display_name}({','.join(c.text() for c in self.children)})"

    def scala_pattern(self) -> str:
        """Scala match-pattern syntax; nullary constructors keep ``()``."""
        return f"{self.root.display_name}({','.join(c.scala_pattern() for c in self.children)})"

    def __repr__(self):
        return self.text()


@dataclass(frozen=True)
class Transition:
    symbol: RankedSymbol
    state: str
    child_states: tuple[str, ...]

    def __post_init__(self):
        if len(self.child_states) != self.symbol.arity:
            raise ValueError(
                f"transition for {self.symbol.name} has {len(self.child_states)} "
                f"child states, arity is {self.symbol.arity}"
            )


@dataclass(frozen=True)
class Domain:
    """Top-down tree automaton (symbols, states, initial states, transitions).

    Declaration order of symbols and transitions is significant: it is the
    tie-breaking order for minimal trees and for grammar rule order.
    """

    symbols: tuple[RankedSymbol, ...]
    states: tuple[str, ...]
    initial: tuple[str, ...]
    transitions: tuple[Transition, ...]

    def __post_init__(self):
        names = [s.name for s in self.symbols]
        if len(set(names)) != len(names):
            raise DomainError("duplicate symbol name in alphabet")
        state_set = set(self.states)
        if not set(self.initial) <= state_set:
            raise DomainError("initial states not a subset of states")
        for tr in self.transitions:
            if tr.state not in state_set or not set(tr.child_states) <= state_set:
                raise DomainError(f"transition {tr} references unknown state")
            if tr.symbol not in self.symbols:
                raise DomainError(f"transition {tr} references unknown symbol")

    @property
    def size(self) -> int:
        """|D| = sum over transitions of (1 + arity)."""
        return sum(1 + t.symbol.arity for t in self.transitions)

    @cached_property
    def symbol_index(self) -> dict[RankedSymbol, int]:
        return {s: i for i, s in enumerate(self.symbols)}

    @cached_property
    def by_state(self) -> dict[str, tuple[Transition, ...]]:
        out: dict[str, list[Transition]] = {q: [] for q in self.states}
        for tr in self.transitions:
            out[tr.state].append(tr)
        return {q: tuple(v) for q, v in out.items()}

    def symbol(self, name: str) -> RankedSymbol:
        for s in self.symbols:
            if s.name == name:
                return s
        raise KeyError(name)

    @cached_property
    def _key_memo(self) -> dict:
        return {}

    def tree_key(self, t: Tree):
        """Total order on trees: size, then root declaration order, then children."""
        key = self._key_memo.get(t)
        if key is None:
            key = (t.size, self.symbol_index[t.root],
                   tuple(self.tree_key(c) for c in t.children))
            self._key_memo[t] = key
        return key

    @cached_property
    def _accepts_memo(self) -> dict:
        return {}

    def accepts(self, t: Tree, state: str | None = None) -> bool:
        if state is None:
            return any(self.accepts(t, q) for q in self.initial)
        hit = self._accepts_memo.get((t, state))
        if hit is not None:
            return hit
        result = any(
            tr.symbol == t.root
            and all(self.accepts(c, q) for c, q in zip(t.children, tr.child_states))
            for tr in self.by_state[state]
        )
        self._accepts_memo[(t, state)] = result
        return result

    @cached_property
    def minimal_trees(self) -> dict[str, Tree]:
        """Per state, the minimal accepted tree (ties by transition order)."""
        best: dict[str, Tree] = {}
        changed = True
        while changed:
            changed = False
            for tr in self.transitions:
                if not all(q in best for q in tr.child_states):
                    continue
                value = "#" if tr.symbol.is_string_leaf else None
                cand = Tree(tr.symbol, tuple(best[q] for q in tr.child_states), value)
                cur = best.get(tr.state)
                if cur is None or self.tree_key(cand) < self.tree_key(cur):
                    best[tr.state] = cand
                    changed = True
        return best

    def productive_states(self) -> set[str]:
        return set(self.minimal_trees)


def minimal_tree(domain: Domain, state: str) -> Tree:
    """Minimal tree accepted at ``state``; deterministic across runs."""
    try:
        return domain.minimal_trees[state]
    except KeyError:
        raise DomainError(f"state {state} is unproductive (no finite tree)") from None


def enumerate_trees(domain: Domain, max_count: int, max_depth: int = 8) -> list[Tree]:
    """The ``max_count`` smallest domain trees of depth <= ``max_depth``.

    Order is tree size, ties by declaration order.  Generation proceeds
    size by size, so work is proportional to the trees actually produced;
    on finite domains the enumeration is exhaustive (a new tree of size s
    needs children among the existing trees, which bounds the largest size
    worth scanning).
    """
    if max_count <= 0:
        return []
    # per state and size: all depth-bounded trees, and the subset shallow
    # enough to serve as children of a depth-bounded parent
    by_size: dict[str, dict[int, list[Tree]]] = {q: {} for q in domain.states}
    child_pool: dict[str, dict[int, list[Tree]]] = {q: {} for q in domain.states}
    collected: list[Tree] = []
    max_arity = max((s.arity for s in domain.symbols), default=0)
    max_realized = 0

    def compositions(total: int, parts: int):
        if parts == 1:
            yield (total,)
            return
        for first in range(1, total - parts + 2):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    size = 0
    while len(collected) < max_count:
        size += 1
        if size > 1 + max_arity * max_realized:
            break  # no composition of existing trees can reach this size
        produced = False
        for tr in domain.transitions:
            k = tr.symbol.arity
            news: list[Tree] = []
            if k == 0:
                if size == 1:
                    value = "#" if tr.symbol.is_string_leaf else None
                    news.append(Tree(tr.symbol, (), value))
            else:
                for split in compositions(size - 1, k):
                    pools = [
                        child_pool[q].get(s, ())
                        for q, s in zip(tr.child_states, split)
                    ]
                    if any(not p for p in pools):
                        continue
                    news.extend(Tree(tr.symbol, combo) for combo in _product(pools))
            if not news:
                continue
            bucket = by_size[tr.state].setdefault(size, [])
            existing = set(bucket)
            for t in news:
                if t not in existing:
                    existing.add(t)
                    bucket.append(t)
                    produced = True
            child_pool[tr.state][size] = [
                t for t in bucket if t.depth < max_depth
            ]
        if produced:
            max_realized = size
            seen = set(collected)
            for q in domain.initial:
                for t in by_size[q].get(size, ()):
                    if t not in seen:
                        seen.add(t)
                        collected.append(t)
    return sorted(collected, key=domain.tree_key)[:max_count]


def _product(pools):
    if not pools:
        yield ()
        return
    for first in pools[0]:
        for rest in _product(pools[1:]):
            yield (first,) + rest


# --- ADT declarations -------------------------------------------------------

PRIMITIVE_STANDINS = {
    "String": ("foo", "bar"),
    "Boolean": ("true", "false"),
    "Int": ("1", "2"),
}


@dataclass(frozen=True)
class CaseClass:
    name: str
    fields: tuple[tuple[str, str], ...]  # (field name, type name)
    parent: str | None
    line: int = 0


@dataclass(frozen=True)
class AbstractClass:
    name: str
    line: int = 0


@dataclass(frozen=True)
class AdtDeclaration:
    abstracts: tuple[AbstractClass, ...]
    cases: tuple[CaseClass, ...]
    # case-class name -> fixed printed value, for primitive stand-ins
    fixed_outputs: dict[str, str] = field(default_factory=dict)

    @property
    def class_names(self) -> set[str]:
        return {a.name for a in self.abstracts} | {c.name for c in self.cases}

    @property
    def primitive_fields(self) -> list[tuple[str, str, str]]:
        """(class, field, primitive type) for every primitive-typed field."""
        out = []
        for c in self.cases:
            for fname, ftype in c.fields:
                if ftype in PRIMITIVE_STANDINS:
                    out.append((c.name, fname, ftype))
        return out


_ABSTRACT_RE = re.compile(r"^abstract\s+class\s+([A-Za-z_]\w*)$")
_CASE_RE = re.compile(
    r"^case\s+class\s+([A-Za-z_]\w*)\s*\(([^()]*)\)\s*(?:extends\s+([A-Za-z_]\w*))?$"
)
_FIELD_RE = re.compile(r"^([A-Za-z_]\w*)\s*:\s*([A-Za-z_]\w*)$")


def parse_adt(source: str) -> AdtDeclaration:
    """Parse the Scala-like declaration subset.

    Accepted forms, one per line (``//`` comments and blank lines ignored):
    ``abstract class X``, ``case class C(f: T, ...) extends X`` and
    standalone ``case class C(...)``.
    """
    abstracts: list[AbstractClass] = []
    cases: list[CaseClass] = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        m = _ABSTRACT_RE.match(line)
        if m:
            _check_duplicate(m.group(1), seen, lineno)
            abstracts.append(AbstractClass(m.group(1), lineno))
            continue
        m = _CASE_RE.match(line)
        if m:
            name, raw_fields, parent = m.group(1), m.group(2), m.group(3)
            _check_duplicate(name, seen, lineno)
            fields = []
            if raw_fields.strip():
                for part in raw_fields.split(","):
                    fm = _FIELD_RE.match(part.strip())
                    if not fm:
                        raise AdtParseError(f"malformed field {part.strip()!r}", lineno)
                    fields.append((fm.group(1), fm.group(2)))
            fnames = [f for f, _ in fields]
            if len(set(fnames)) != len(fnames):
                raise AdtParseError(f"duplicate field name in {name}", lineno)
            cases.append(CaseClass(name, tuple(fields), parent, lineno))
            continue
        raise AdtParseError(f"cannot parse declaration {line!r}", lineno)

    decl = AdtDeclaration(tuple(abstracts), tuple(cases))
    _validate(decl)
    return decl


def _check_duplicate(name: str, seen: dict[str, int], lineno: int):
    if name in seen:
        raise AdtParseError(f"duplicate class name {name} (first at line {seen[name]})", lineno)
    seen[name] = lineno


def _validate(decl: AdtDeclaration):
    abstract_names = {a.name for a in decl.abstracts}
    known = decl.class_names
    for c in decl.cases:
        if c.parent is not None and c.parent not in abstract_names:
            raise AdtParseError(f"parent {c.parent} of {c.name} undeclared", c.line)
        for fname, ftype in c.fields:
            if ftype not in known and ftype not in PRIMITIVE_STANDINS:
                raise AdtParseError(
                    f"field {fname} of {c.name} has undeclared type {ftype}", c.line
                )


def desugar_primitives(decl: AdtDeclaration) -> AdtDeclaration:
    """Replace each primitive-typed field by a fresh two-constructor class.

    The two constructors print fixed values that are not prefixes of each
    other; the values are recorded in ``fixed_outputs`` so the synthesis
    engine treats them as already-answered outputs.
    """
    if not decl.primitive_fields:
        return decl
    abstracts = list(decl.abstracts)
    cases = []
    fixed = dict(decl.fixed_outputs)
    taken = decl.class_names
    for c in decl.cases:
        new_fields = []
        for fname, ftype in c.fields:
            if ftype not in PRIMITIVE_STANDINS:
                new_fields.append((fname, ftype))
                continue
            base = _fresh(f"{c.name}_{fname}", taken)
            taken.add(base)
            v1, v2 = PRIMITIVE_STANDINS[ftype]
            case1, case2 = f"{base}_{v1}", f"{base}_{v2}"
            abstracts.append(AbstractClass(base, c.line))
            cases.append(CaseClass(case1, (), base, c.line))
            cases.append(CaseClass(case2, (), base, c.line))
            fixed[case1] = v1
            fixed[case2] = v2
            new_fields.append((fname, base))
        cases.append(CaseClass(c.name, tuple(new_fields), c.parent, c.line))
    return AdtDeclaration(tuple(abstracts), tuple(cases), fixed)


def _fresh(base: str, taken: set[str]) -> str:
    name, i = base, 1
    while name in taken:
        i += 1
        name = f"{base}{i}"
    return name


def domain_of(decl: AdtDeclaration) -> Domain:
    """Build the domain: one state per abstract class, per standalone case
    class, and per parented case class that is referenced as a field type;
    one transition per case class (plus one at the dedicated state for
    referenced case classes).  Every state is initial.
    """
    if decl.primitive_fields:
        raise DomainError("declaration still has primitive fields; desugar first")

    abstract_names = {a.name for a in decl.abstracts}
    case_by_name = {c.name: c for c in decl.cases}
    referenced = {
        ftype
        for c in decl.cases
        for _, ftype in c.fields
        if ftype in case_by_name and case_by_name[ftype].parent is not None
    }

    states: list[str] = []
    for a in decl.abstracts:
        states.append(a.name)
    for c in decl.cases:
        if c.parent is None:
            states.append(c.name)
    for c in decl.cases:
        if c.name in referenced:
            states.append(c.name)

    symbols = tuple(
        RankedSymbol(c.name, len(c.fields)) for c in decl.cases
    )
    sym = {s.name: s for s in symbols}

    transitions: list[Transition] = []
    for c in decl.cases:
        child_states = tuple(ftype for _, ftype in c.fields)
        home = c.parent if c.parent is not None else c.name
        transitions.append(Transition(sym[c.name], home, child_states))
    for c in decl.cases:
        if c.name in referenced:
            child_states = tuple(ftype for _, ftype in c.fields)
            transitions.append(Transition(sym[c.name], c.name, child_states))

    domain = Domain(symbols, tuple(states), tuple(states), tuple(transitions))
    unproductive = set(states) - domain.productive_states()
    if unproductive:
        raise DomainError(
            f"unproductive states (no finite tree exists): {sorted(unproductive)}"
        )
    return domain


def standin_sample(decl: AdtDeclaration, domain: Domain) -> dict[Tree, str]:
    """Nullary stand-in trees with their fixed printed values."""
    return {
        Tree(domain.symbol(name)): value
        for name, value in decl.fixed_outputs.items()
    }


def gen_lower_bound_domain(n: int) -> Domain:
    """The three-level benchmark family: n unary symbols per upper level, n
    nullary leaves, all three states initial; the domain has n^3 + n^2 + n
    trees.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    a = [RankedSymbol(f"A{j}", 1) for j in range(1, n + 1)]
    b = [RankedSymbol(f"B{j}", 1) for j in range(1, n + 1)]
    f = [RankedSymbol(f"F{j}", 0) for j in range(1, n + 1)]
    transitions = (
        [Transition(s, "q2", ("q1",)) for s in a]
        + [Transition(s, "q1", ("q0",)) for s in b]
        + [Transition(s, "q0", ()) for s in f]
    )
    return Domain(
        tuple(a + b + f), ("q2", "q1", "q0"), ("q2", "q1", "q0"), tuple(transitions)
    )

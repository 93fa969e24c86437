"""Cubic test sets for context-free grammars and tree test sets for domains.

Two morphisms that agree on a test set of a language agree on the whole
language.  The construction: substitute minimal words to linearize the
grammar, view the linear grammar as a labeled graph, precompute the unique
optimal path between every vertex pair, and emit the words of all paths
stitched from at most three free edges joined by optimal segments.  Decoding
those words gives a tree test set, closed under subtree whenever every
domain state is initial.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .adt import Domain, DomainError, Tree, minimal_tree
from .cfg import Cfg, CfgRule, Nt
from .transducer import decode_tree, default_encode, domain_to_grammar


class TestSetError(Exception):
    __test__ = False  # not a pytest class


BOTTOM = "__bottom__"


@dataclass(frozen=True)
class Edge:
    source: str
    rule_index: int
    target: str  # nonterminal name or BOTTOM
    west: tuple  # terminals emitted left of the kept nonterminal
    east: tuple  # terminals emitted right of it


@dataclass(frozen=True)
class GrammarGraph:
    """Labeled graph of a linear grammar: vertices are nonterminals plus a
    bottom vertex; each edge is a rule with at most one nonterminal."""

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    start: str


def grammar_graph(grammar: Cfg) -> GrammarGraph:
    if not grammar.is_linear():
        raise TestSetError("grammar graph requires a linear grammar")
    edges = []
    for idx, rule in enumerate(grammar.rules):
        nts = [(i, x) for i, x in enumerate(rule.rhs) if isinstance(x, Nt)]
        if nts:
            pos, nt = nts[0]
            west = tuple(rule.rhs[:pos])
            east = tuple(rule.rhs[pos + 1:])
            edges.append(Edge(rule.lhs, idx, nt.name, west, east))
        else:
            edges.append(Edge(rule.lhs, idx, BOTTOM, tuple(rule.rhs), ()))
    return GrammarGraph(grammar.nonterminals + (BOTTOM,), tuple(edges), grammar.start)


PathTable = dict  # (source, target) -> tuple[Edge, ...]


def optimal_paths(graph: GrammarGraph) -> PathTable:
    """The unique optimal path for every vertex pair.

    A path is smaller than another if it is shorter, or of equal length and
    lexicographically smaller on rule indices; the minimum is unique, and
    prefixes/suffixes of optimal paths are optimal.
    """
    out_edges: dict[str, list[Edge]] = {v: [] for v in graph.vertices}
    for e in graph.edges:
        out_edges[e.source].append(e)
    table: PathTable = {}
    for source in graph.vertices:
        best: dict[str, tuple] = {source: ()}
        heap = [((0, ()), source)]
        settled = set()
        while heap:
            (length, key), vertex = heapq.heappop(heap)
            if vertex in settled:
                continue
            settled.add(vertex)
            for e in out_edges.get(vertex, ()):
                new_key = (length + 1, key + (e.rule_index,))
                cur = best.get(e.target)
                if cur is None or new_key < (len(cur), tuple(p.rule_index for p in cur)):
                    best[e.target] = best[vertex] + (e,)
                    heapq.heappush(heap, (new_key, e.target))
        for target, path in best.items():
            table[(source, target)] = path
    return table


def path_word(path) -> tuple:
    """Terminal word of a full derivation path: left parts in order, then
    right parts in reverse."""
    west: list = []
    east: list = []
    for e in path:
        west.extend(e.west)
        east.append(e.east)
    for part in reversed(east):
        west.extend(part)
    return tuple(west)


def minimal_words(grammar: Cfg) -> dict[str, tuple]:
    """Per nonterminal, the minimal derivable terminal word (shortest, ties
    by rule order applied outside-in)."""

    def key_of(word, deriv_key):
        return (len(word),) + deriv_key

    best: dict[str, tuple] = {}
    best_key: dict[str, tuple] = {}
    changed = True
    while changed:
        changed = False
        for idx, rule in enumerate(grammar.rules):
            if any(nt not in best for nt in rule.nonterminals()):
                continue
            word: list = []
            deriv_key: tuple = (idx,)
            for x in rule.rhs:
                if isinstance(x, Nt):
                    word.extend(best[x.name])
                    deriv_key = deriv_key + best_key[x.name]
                else:
                    word.append(x)
            cand_key = key_of(word, deriv_key)
            cur = best_key.get(rule.lhs)
            if cur is None or cand_key < key_of(best[rule.lhs], cur):
                best[rule.lhs] = tuple(word)
                best_key[rule.lhs] = deriv_key
                changed = True
    return best


def linearize(grammar: Cfg, substitutions: dict[str, tuple] | None = None) -> Cfg:
    """Lin(G): replace all but one nonterminal per rule by minimal words.

    A rule with n >= 1 nonterminals becomes n rules, each keeping one
    nonterminal; rules without nonterminals are kept as-is.  The language of
    the result is contained in the original language and is a test set for
    it.
    """
    subs = substitutions if substitutions is not None else minimal_words(grammar)
    missing = {
        nt for rule in grammar.rules for nt in rule.nonterminals() if nt not in subs
    }
    if missing:
        raise TestSetError(f"unproductive nonterminals: {sorted(missing)}")
    rules: list[CfgRule] = []
    for rule in grammar.rules:
        positions = [i for i, x in enumerate(rule.rhs) if isinstance(x, Nt)]
        if not positions:
            rules.append(rule)
            continue
        for keep in positions:
            rhs: list = []
            for i, x in enumerate(rule.rhs):
                if isinstance(x, Nt) and i != keep:
                    rhs.extend(subs[x.name])
                else:
                    rhs.append(x)
            rules.append(CfgRule(rule.lhs, tuple(rhs)))
    return Cfg(grammar.nonterminals, tuple(rules), grammar.start)


def phi3(linear_grammar: Cfg) -> set[tuple]:
    """Words of all accepting paths assembled from at most three chosen
    edges stitched together with optimal paths; at most 2|R|^3 distinct
    words, every one derivable in the grammar.

    Prefixes are shared across the edge-tuple enumeration: a prefix is the
    (west word, pending east parts) pair accumulated up to the last chosen
    edge, and each level only extends prefixes that connect.
    """
    graph = grammar_graph(linear_grammar)
    table = optimal_paths(graph)
    words: set[tuple] = set()
    rule_count = max(len(linear_grammar.rules), 1)

    # tails[v] = (west, east-reversed) of the optimal path v -> bottom
    tails = {}
    for v in graph.vertices:
        tail = table.get((v, BOTTOM))
        if tail is not None:
            tails[v] = _path_parts(tail)
    # connectors[(a, b)] = parts of the optimal path a -> b
    connectors = {pair: _path_parts(path) for pair, path in table.items()}

    def finish(at: str, west: tuple, easts: tuple):
        tail = tails.get(at)
        if tail is None:
            return
        word = west + tail[0] + tail[1]
        for part in reversed(easts):
            word += part
        words.add(word)

    def extend(at: str, west: tuple, easts: tuple, e: Edge):
        seg = connectors.get((at, e.source))
        if seg is None:
            return None
        # the segment's east wraps around everything chosen later, so it is
        # queued (in path order) and emitted reversed by finish()
        return (e.target, west + seg[0] + e.west, easts + (seg[1], e.east))

    start_prefix = (graph.start, (), ())
    finish(*start_prefix)
    level1 = []
    for e1 in graph.edges:
        p1 = extend(*start_prefix, e1)
        if p1 is None:
            continue
        finish(*p1)
        level1.append(p1)
    level2 = []
    for p1 in level1:
        for e2 in graph.edges:
            p2 = extend(*p1, e2)
            if p2 is None:
                continue
            finish(*p2)
            level2.append(p2)
    for p2 in level2:
        for e3 in graph.edges:
            p3 = extend(*p2, e3)
            if p3 is not None:
                finish(*p3)

    if len(words) > 2 * rule_count**3:
        raise AssertionError(
            f"test set size {len(words)} exceeds 2|R|^3 = {2 * rule_count**3}"
        )
    return words


def _path_parts(path) -> tuple[tuple, tuple]:
    """(west word, east word) of a path segment; east is already reversed
    into reading order."""
    west: list = []
    easts: list = []
    for e in path:
        west.extend(e.west)
        easts.append(e.east)
    east: list = []
    for part in reversed(easts):
        east.extend(part)
    return tuple(west), tuple(east)


def tree_test_set(domain: Domain) -> tuple[Tree, ...]:
    """Tree test set of a domain whose states are all initial.

    Decodes the cubic word test set of the linearized encoding grammar and
    adds the minimal tree of every state; the result is verified to be
    within the domain and closed under subtree.  Returned in deterministic
    (size, declaration) order.
    """
    if set(domain.initial) != set(domain.states):
        raise DomainError("tree test set construction requires I = Q")
    unproductive = set(domain.states) - domain.productive_states()
    if unproductive:
        raise DomainError(f"unproductive states: {sorted(unproductive)}")

    grammar = domain_to_grammar(domain)
    subs = {
        f"A_{q}": default_encode(minimal_tree(domain, q)) for q in domain.states
    }
    start_key = min(
        (len(subs[f"A_{q}"]), i, q) for i, q in enumerate(domain.initial)
    )
    subs[grammar.start] = subs[f"A_{start_key[2]}"]

    linear = linearize(grammar, subs)
    trees = {decode_tree(w) for w in phi3(linear)}
    trees.update(decode_tree(subs[nt]) for nt in grammar.nonterminals)

    for t in trees:
        if not domain.accepts(t):
            raise AssertionError(f"test-set tree {t.text()} outside the domain")
        for sub in t.subtrees():
            if sub not in trees:
                raise AssertionError(
                    f"test set not closed under subtree: {sub.text()} missing"
                )
    return tuple(sorted(trees, key=domain.tree_key))


def linear_string_test_set(
    domain: Domain, default: str = "#", flipped: str = "?"
) -> tuple[Tree, ...]:
    """Linear-size tree test set for domains with string-valued leaves.

    For every symbol: one tree whose string leaves all carry the default
    value, plus one variant per argument position where that argument's
    designated leaf carries the flipped value.  Requires every argument
    position of every symbol to admit a subtree containing a string leaf.
    """
    leaves = [s for s in domain.symbols if s.is_string_leaf]
    if len(leaves) != 1:
        raise TestSetError("expected exactly one string-leaf symbol")
    leaf = leaves[0]

    # minimal tree per state containing at least one string leaf
    minimal = domain.minimal_trees
    best: dict[str, Tree] = {}
    changed = True
    while changed:
        changed = False
        for tr in domain.transitions:
            candidates = []
            if tr.symbol == leaf:
                candidates.append(Tree(leaf, (), default))
            elif all(q in minimal for q in tr.child_states):
                for i, qi in enumerate(tr.child_states):
                    if qi not in best:
                        continue
                    children = tuple(
                        best[qi] if j == i else minimal[qj]
                        for j, qj in enumerate(tr.child_states)
                    )
                    candidates.append(Tree(tr.symbol, children))
            for cand in candidates:
                cur = best.get(tr.state)
                if cur is None or domain.tree_key(cand) < domain.tree_key(cur):
                    best[tr.state] = cand
                    changed = True

    result: list[Tree] = []
    for sym in domain.symbols:
        transitions = [t for t in domain.transitions if t.symbol == sym]
        if not transitions:
            continue
        if sym.is_string_leaf:
            result.append(Tree(sym, (), default))
            continue
        chosen = None
        for tr in transitions:
            if all(q in best for q in tr.child_states):
                chosen = tr
                break
        if chosen is None:
            bad = next(
                (i, q)
                for tr in transitions
                for i, q in enumerate(tr.child_states)
                if q not in best
            )
            raise TestSetError(
                f"no string-leaf-bearing subtree for argument {bad[0] + 1} "
                f"of {sym.name}; fall back to the stand-in reduction"
            )
        defaults = [
            _set_first_leaf(best[q], default, default) for q in chosen.child_states
        ]
        result.append(Tree(sym, tuple(defaults)))
        for j in range(sym.arity):
            variant = list(defaults)
            variant[j] = _set_first_leaf(best[chosen.child_states[j]], flipped, default)
            result.append(Tree(sym, tuple(variant)))

    deduped = []
    seen = set()
    for t in result:
        if t not in seen:
            seen.add(t)
            deduped.append(t)
    return tuple(deduped)


def _has_leaf(t: Tree) -> bool:
    return t.root.is_string_leaf or any(_has_leaf(c) for c in t.children)


def _set_first_leaf(t: Tree, value: str, rest: str) -> Tree:
    """Copy of ``t`` with its first (preorder) string leaf set to ``value``
    and every other leaf set to ``rest``."""

    done = False

    def walk(node: Tree) -> Tree:
        nonlocal done
        if node.root.is_string_leaf:
            if not done:
                done = True
                return Tree(node.root, (), value)
            return Tree(node.root, (), rest)
        return Tree(node.root, tuple(walk(c) for c in node.children))

    return walk(t)

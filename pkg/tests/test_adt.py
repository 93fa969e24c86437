import itertools

import pytest

from printsynth.adt import (
    AdtParseError,
    DomainError,
    RankedSymbol,
    Transition,
    Tree,
    desugar_primitives,
    domain_of,
    enumerate_trees,
    gen_lower_bound_domain,
    minimal_tree,
    parse_adt,
)
from conftest import GRAMMAR_SOURCE, HTML_SOURCE


def brute_force_trees(domain, max_size):
    """Independent enumeration oracle: all domain trees up to a node count,
    built by blind recursive expansion."""
    by_state_size = {q: {0: set()} for q in domain.states}

    def trees_at(state, size):
        cached = by_state_size[state].get(size)
        if cached is not None:
            return cached
        out = set()
        for tr in domain.by_state[state]:
            k = tr.symbol.arity
            if k == 0:
                if size == 1:
                    out.add(Tree(tr.symbol))
                continue
            for split in compositions(size - 1, k):
                for combo in itertools.product(
                    *(trees_at(q, s) for q, s in zip(tr.child_states, split))
                ):
                    out.add(Tree(tr.symbol, combo))
        by_state_size[state][size] = out
        return out

    def compositions(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(1, total - parts + 2):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    return {
        q: set().union(*(trees_at(q, s) for s in range(1, max_size + 1)))
        for q in domain.states
    }


def test_parse_grammar_adt_counts():
    decl = parse_adt(GRAMMAR_SOURCE)
    assert len(decl.abstracts) == 5
    assert len(decl.cases) == 12
    standalone = [c for c in decl.cases if c.parent is None]
    assert {c.name for c in standalone} == {"Rule", "Grammar"}


def test_parse_undeclared_parent():
    with pytest.raises(AdtParseError, match="parent List of nil undeclared"):
        parse_adt("case class nil() extends List")


def test_parse_reports_line_numbers():
    with pytest.raises(AdtParseError, match="line 2"):
        parse_adt("abstract class A\nclass broken thing")


def test_parse_duplicate_class():
    with pytest.raises(AdtParseError, match="duplicate class name"):
        parse_adt("abstract class A\nabstract class A")


def test_parse_comments_and_blank_lines():
    decl = parse_adt("// header\nabstract class A\n\ncase class x() extends A // end\n")
    assert [c.name for c in decl.cases] == ["x"]


def test_html_domain_matches_reference(html_domain):
    assert {s.name for s in html_domain.symbols} == {
        "nil", "cons", "node", "div", "pre", "span",
    }
    arities = {s.name: s.arity for s in html_domain.symbols}
    assert arities == {"nil": 0, "cons": 2, "node": 2, "div": 0, "pre": 0, "span": 0}
    assert set(html_domain.states) == {"Node", "Tag", "List"}
    assert set(html_domain.initial) == set(html_domain.states)
    assert len(html_domain.transitions) == 6
    assert html_domain.size == 1 + 1 + 1 + 1 + 3 + 3


def test_single_constructor_domain():
    domain = domain_of(parse_adt("case class a()"))
    assert len(domain.symbols) == 1
    assert len(domain.states) == 1
    assert len(domain.transitions) == 1


def test_recursive_only_declaration_unproductive():
    with pytest.raises(DomainError, match="unproductive"):
        domain_of(parse_adt("abstract class C\ncase class c(x: C) extends C"))


def test_referenced_case_class_gets_state(grammar_domain):
    # NonTerminal is a parented case class used as a field type by Rule and
    # Grammar, so it carries its own single-constructor state
    assert "NonTerminal" in grammar_domain.states
    at_nt = [t for t in grammar_domain.transitions if t.state == "NonTerminal"]
    assert len(at_nt) == 1 and at_nt[0].symbol.name == "NonTerminal"
    assert len(grammar_domain.transitions) == 13


def test_desugar_string_field():
    decl = desugar_primitives(parse_adt("case class C(s: String)"))
    assert decl.primitive_fields == []
    values = sorted(decl.fixed_outputs.values())
    assert values == ["bar", "foo"]
    # neither fixed value is a prefix of the other
    v1, v2 = values
    assert not v1.startswith(v2) and not v2.startswith(v1)


def test_desugar_int_values_not_prefixes():
    decl = desugar_primitives(parse_adt("case class C(n: Int)"))
    v1, v2 = sorted(decl.fixed_outputs.values())
    assert {v1, v2} == {"1", "2"}
    assert not v1.startswith(v2) and not v2.startswith(v1)


def test_desugar_identity_without_primitives():
    decl = parse_adt(HTML_SOURCE)
    assert desugar_primitives(decl) is decl


def test_desugared_domain_builds():
    decl = desugar_primitives(
        parse_adt("abstract class P\ncase class Person(name: String, age: Int) extends P")
    )
    domain = domain_of(decl)
    assert len(domain.transitions) == 5  # Person + two stand-in pairs


def test_minimal_trees_html(html_domain):
    assert minimal_tree(html_domain, "Tag").text() == "div"
    assert minimal_tree(html_domain, "List").text() == "nil"
    assert minimal_tree(html_domain, "Node").text() == "node(div,nil)"


def test_minimal_tree_is_minimal_by_enumeration(html_domain, grammar_domain):
    for domain in (html_domain, grammar_domain):
        pools = brute_force_trees(domain, 6)
        for q in domain.states:
            best = minimal_tree(domain, q)
            assert domain.accepts(best, q)
            smaller = [t for t in pools[q] if t.size < best.size]
            assert smaller == []


def test_lower_bound_domain_counts():
    for n in (1, 2, 3, 4):
        domain = gen_lower_bound_domain(n)
        assert len(domain.symbols) == 3 * n
        assert len(domain.transitions) == 3 * n
        pools = brute_force_trees(domain, 3)
        total = len(set().union(*(pools[q] for q in domain.initial)))
        assert total == n**3 + n**2 + n


def test_enumerate_trees_smallest_first(html_domain):
    trees = enumerate_trees(html_domain, 3)
    assert [t.text() for t in trees] == ["div", "pre", "span"]


def test_enumerate_trees_exhausts_finite_domain():
    domain = gen_lower_bound_domain(1)
    assert len(enumerate_trees(domain, 10)) == 3


def test_enumerate_trees_zero():
    assert enumerate_trees(gen_lower_bound_domain(1), 0) == []


def test_enumerate_trees_matches_brute_force(html_domain):
    got = enumerate_trees(html_domain, 40, max_depth=6)
    pools = brute_force_trees(html_domain, 12)
    expected = sorted(
        (t for t in set().union(*pools.values()) if t.depth <= 6),
        key=html_domain.tree_key,
    )[:40]
    assert got == expected


def test_transition_arity_checked():
    sym = RankedSymbol("f", 2)
    with pytest.raises(ValueError):
        Transition(sym, "q", ("q",))


def test_domain_determinism():
    one = domain_of(desugar_primitives(parse_adt(GRAMMAR_SOURCE)))
    two = domain_of(desugar_primitives(parse_adt(GRAMMAR_SOURCE)))
    assert one == two

"""Tests for the canonical graph encoding."""

from incoherify.amr import AmrGraph, Edge, canonical_form, is_isomorphic, parse


class TestIsIsomorphic:
    def test_ignores_variable_names(self):
        a = parse("(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))")
        b = parse("(x / want-01 :ARG0 (y / boy) :ARG1 (z / go-02 :ARG0 y))")
        assert is_isomorphic(a, b)
        assert canonical_form(a) == canonical_form(b)

    def test_ignores_sibling_order(self):
        a = parse("(a / see-01 :ARG0 (b / boy) :ARG1 (c / cat))")
        b = parse("(q / see-01 :ARG1 (r / cat) :ARG0 (s / boy))")
        assert is_isomorphic(a, b)

    def test_concepts_matter(self):
        a = parse("(a / see-01 :ARG0 (b / boy))")
        b = parse("(a / see-01 :ARG0 (b / girl))")
        assert not is_isomorphic(a, b)

    def test_roles_matter(self):
        a = parse("(a / see-01 :ARG0 (b / boy))")
        b = parse("(a / see-01 :ARG1 (b / boy))")
        assert not is_isomorphic(a, b)

    def test_attributes_matter(self):
        a = parse("(a / see-01 :ARG0 (b / boy))")
        b = parse("(a / see-01 :polarity - :ARG0 (b / boy))")
        assert not is_isomorphic(a, b)

    def test_reentrancy_differs_from_a_duplicated_node(self):
        shared = parse("(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))")
        copied = parse("(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 (b2 / boy)))")
        assert not is_isomorphic(shared, copied)

    def test_tied_siblings_are_told_apart_by_reentrancy(self):
        siblings = ":mod (a / x :mod (c / y)) :mod (b / x :mod (d / y))"
        swapped = ":mod (b / x :mod (d / y)) :mod (a / x :mod (c / y))"
        a = parse(f"(r / root-01 {siblings} :ARG1 (z / w :ARG2 c))")
        b = parse(f"(r / root-01 {swapped} :ARG1 (z / w :ARG2 c))")
        assert is_isomorphic(a, b)

    def test_reentrancy_into_one_or_both_tied_siblings(self):
        siblings = ":mod (a / x :mod (c / y)) :mod (b / x :mod (d / y))"
        one = parse(f"(r / root-01 {siblings} :ARG1 (z / w :ARG2 c :ARG3 c))")
        both = parse(f"(r / root-01 {siblings} :ARG1 (z / w :ARG2 c :ARG3 d))")
        assert not is_isomorphic(one, both)

    def test_identical_siblings(self):
        a = parse("(r / and :mod (a / x :mod (c / y)) :mod (b / x :mod (d / y)))")
        b = parse("(q / and :mod (e / x :mod (f / y)) :mod (g / x :mod (h / y)))")
        assert is_isomorphic(a, b)


def _diamonds(depth: int, prefix: str, reverse: bool) -> AmrGraph:
    """`depth` stacked diamonds: each `and` node has two children that share the next one."""
    nodes, edges = {}, []
    for k in range(depth):
        m, left, right = f"{prefix}m{k}", f"{prefix}l{k}", f"{prefix}r{k}"
        nodes.update({m: "and", left: "left", right: "right"})
        edges += [
            Edge(m, ":op1", left),
            Edge(m, ":op2", right),
            Edge(left, ":ARG0", f"{prefix}m{k + 1}"),
            Edge(right, ":ARG0", f"{prefix}m{k + 1}"),
        ]
    nodes[f"{prefix}m{depth}"] = "end"
    if reverse:
        edges.reverse()
    return AmrGraph(root=f"{prefix}m0", nodes=nodes, edges=tuple(edges))


class TestSharedSubgraphs:
    def test_encoding_grows_linearly(self):
        form = canonical_form(_diamonds(40, "v", reverse=False))
        assert len(form) < 5_000
        assert form.count("#") == 40

    def test_renamed_diamonds(self):
        assert is_isomorphic(_diamonds(40, "v", False), _diamonds(40, "w", True))
        assert not is_isomorphic(_diamonds(40, "v", False), _diamonds(39, "v", False))

"""
Structural edits over `AmrGraph`. Every function returns a new graph in normal form and
leaves its input untouched; results always pass `validate` when the input did.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Collection

from incoherify.amr.graph import (
    MULTI_SENTENCE,
    AmrGraph,
    Attribute,
    Constant,
    Edge,
    normalized,
    subtree_variables,
    traverse,
    validate,
)
from incoherify.errors import EditError, InvalidGraphError, UndeclaredVariableError

__all__ = [
    "clone_subgraph",
    "fresh_variable",
    "insert_sentence_subgraph",
    "remove_subtree",
    "replace_concept",
    "snt_index",
    "toggle_polarity",
]

logger = logging.getLogger(__name__)

_SNT_RE = re.compile(r"^:snt(\d+)$")


def snt_index(role: str) -> int | None:
    """`3` for `:snt3`, `None` for any other role."""
    m = _SNT_RE.match(role)
    return int(m.group(1)) if m else None


def fresh_variable(concept: str, taken: Collection[str]) -> str:
    """
    Smallest unused variable for `concept`: its lowercased first letter (`x` when that is not a
    letter), then the same letter suffixed 2, 3, ...

    >>> fresh_variable("orange", {"o"})
    'o2'
    """
    first = concept[:1].lower()
    base = first if first.isascii() and first.isalpha() else "x"
    if base not in taken:
        return base
    k = 2
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def _require_declared(graph: AmrGraph, var: str) -> None:
    if var not in graph.nodes:
        raise UndeclaredVariableError(f"variable {var!r} is not declared")


def _require_valid(graph: AmrGraph, what: str) -> None:
    report = validate(graph)
    if not report.ok:
        raise InvalidGraphError(f"{what} is not a valid graph: {report.summary()}", report)


def clone_subgraph(graph: AmrGraph, at: str, *, avoid: Collection[str] = ()) -> AmrGraph:
    """
    Copies everything reachable from `at` into a stand-alone graph with fresh variables.

    Variables are renamed in depth-first order; the new names avoid every variable of `graph`
    and anything in `avoid`.

    Args:
        graph (AmrGraph): source graph
        at (str): root of the copy
        avoid (Collection[str]): extra variable names the copy must not use

    Returns:
        (AmrGraph): the copy, rooted at the renamed `at`

    Raises:
        UndeclaredVariableError: `at` is not declared

    """
    _require_declared(graph, at)
    members = subtree_variables(graph, at)
    sub = AmrGraph(
        root=at,
        nodes={v: c for v, c in graph.nodes.items() if v in members},
        edges=tuple(e for e in graph.edges if e.source in members),
        attributes=tuple(a for a in graph.attributes if a.source in members),
    )

    taken = set(graph.nodes) | set(avoid)
    rename: dict[str, str] = {}
    for var, _ in traverse(sub):
        new = fresh_variable(sub.nodes[var], taken)
        taken.add(new)
        rename[var] = new

    return normalized(
        AmrGraph(
            root=rename[at],
            nodes={rename[v]: c for v, c in sub.nodes.items()},
            edges=tuple(Edge(rename[s], r, rename[t]) for s, r, t in sub.edges),
            attributes=tuple(Attribute(rename[s], r, v) for s, r, v in sub.attributes),
        )
    )


def remove_subtree(graph: AmrGraph, at: str) -> AmrGraph:
    """
    Deletes `at`, every edge into it, and every node that is no longer reachable from the root.

    Descendants of `at` that are still referenced from surviving nodes are kept and stay
    attached there. When an `:sntK` child of a multi-sentence node is removed, that node's
    remaining `:snt` roles are renumbered 1..n in their original numeric order.

    Raises:
        EditError: `at` is the root
        UndeclaredVariableError: `at` is not declared

    """
    _require_declared(graph, at)
    if at == graph.root:
        raise EditError(f"cannot remove the root {at!r}")

    renumber = {
        e.source
        for e in graph.edges
        if e.target == at
        and snt_index(e.role) is not None
        and graph.nodes.get(e.source) == MULTI_SENTENCE
    }

    pruned = AmrGraph(
        root=graph.root,
        nodes={v: c for v, c in graph.nodes.items() if v != at},
        edges=tuple(e for e in graph.edges if at not in (e.source, e.target)),
        attributes=tuple(a for a in graph.attributes if a.source != at),
    )
    kept = {var for var, _ in traverse(pruned)}
    logger.debug(f"Removing {at!r} drops {len(graph.nodes) - len(kept)} node(s)")

    edges = [e for e in pruned.edges if e.source in kept]
    for parent in renumber:
        positions = [
            i
            for i, e in enumerate(edges)
            if e.source == parent and snt_index(e.role) is not None
        ]
        ordered = sorted(positions, key=lambda i: snt_index(edges[i].role) or 0)
        for k, i in enumerate(ordered, start=1):
            edges[i] = edges[i]._replace(role=f":snt{k}")

    return normalized(
        AmrGraph(
            root=graph.root,
            nodes={v: c for v, c in pruned.nodes.items() if v in kept},
            edges=tuple(edges),
            attributes=tuple(a for a in pruned.attributes if a.source in kept),
        )
    )


def insert_sentence_subgraph(graph: AmrGraph, sentence: AmrGraph) -> AmrGraph:
    """
    Appends `sentence` to `graph` as a new sentence unit.

    A multi-sentence host gets the sentence under its next free `:sntK` role. Any other host is
    wrapped in a new `multi-sentence` root holding the old root as `:snt1` and the sentence as
    `:snt2`. The sentence's variables are renamed so that none collide with the host's.

    Raises:
        InvalidGraphError: either input fails `validate`

    """
    _require_valid(graph, "host")
    _require_valid(sentence, "sentence")

    copy = clone_subgraph(sentence, sentence.root, avoid=graph.nodes)
    nodes = {**graph.nodes, **copy.nodes}
    attributes = graph.attributes + copy.attributes

    if graph.is_multi_sentence:
        used = [snt_index(e.role) or 0 for e in graph.edges_from(graph.root)]
        k = max(used, default=0) + 1
        edges = graph.edges + (Edge(graph.root, f":snt{k}", copy.root),) + copy.edges
        root = graph.root
    else:
        root = fresh_variable(MULTI_SENTENCE, nodes)
        nodes = {root: MULTI_SENTENCE, **nodes}
        edges = (
            (Edge(root, ":snt1", graph.root), Edge(root, ":snt2", copy.root))
            + graph.edges
            + copy.edges
        )

    return normalized(AmrGraph(root=root, nodes=nodes, edges=edges, attributes=attributes))


def replace_concept(graph: AmrGraph, var: str, concept: str) -> AmrGraph:
    """Same graph with the concept of `var` rewritten; structure untouched."""
    _require_declared(graph, var)
    if not concept:
        raise EditError("replacement concept must be nonempty")
    nodes = dict(graph.nodes)
    nodes[var] = concept
    return graph.model_copy(update={"nodes": nodes})


def toggle_polarity(graph: AmrGraph, var: str) -> AmrGraph:
    """
    Negates `var`: adds `:polarity -` or, when `var` is already negated, removes it (a double
    negation reads as the affirmed statement).
    """
    _require_declared(graph, var)
    if graph.has_polarity(var):
        attributes = tuple(
            a
            for a in graph.attributes
            if not (a.source == var and a.role == ":polarity" and a.value.kind == "minus")
        )
    else:
        attributes = graph.attributes + (Attribute(var, ":polarity", Constant.minus()),)
    return normalized(graph.model_copy(update={"attributes": attributes}))

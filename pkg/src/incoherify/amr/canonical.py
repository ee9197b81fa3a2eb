"""
Variable-name-independent encoding of an `AmrGraph`, used wherever two graphs have to be
compared "up to renaming": corpus round-trips, replay checks and the worked-example fixtures.

Every node first gets a fixed-size color by iterated refinement over its concept, attributes,
outgoing and incoming edges. The encoding walks the graph from the root, numbering nodes at
first visit (later visits print `#k`) with children ordered by `(role, color)`. Siblings that
share a role and a color are interchangeable as far as refinement can tell; every order of them
is tried and the smallest encoding wins.
"""

from __future__ import annotations

import hashlib
from collections.abc import Iterator
from itertools import permutations, product

from incoherify.amr.graph import AmrGraph, Edge, outgoing_edges

__all__ = ["canonical_form", "is_isomorphic"]


def _digest(text: str) -> str:
    return hashlib.blake2b(text.encode("utf-8"), digest_size=12).hexdigest()


def _attribute_key(graph: AmrGraph, var: str) -> str:
    parts = sorted(
        f"{a.role} {a.value.kind}:{a.value.render()}" for a in graph.attributes_of(var)
    )
    return " ".join(parts)


def _colors(graph: AmrGraph, attributes: dict[str, str]) -> dict[str, str]:
    """Refines node colors until the partition they induce stops splitting."""
    incoming: dict[str, list[Edge]] = {var: [] for var in graph.nodes}
    for e in graph.edges:
        incoming[e.target].append(e)
    outgoing = outgoing_edges(graph)

    colors = {
        var: _digest(f"{graph.nodes[var]} [{attributes[var]}] root={var == graph.root}")
        for var in graph.nodes
    }
    classes = len(set(colors.values()))
    for _ in range(len(graph.nodes)):
        refined = {}
        for var in graph.nodes:
            out = sorted(f">{e.role} {colors[e.target]}" for e in outgoing.get(var, []))
            into = sorted(f"<{e.role} {colors[e.source]}" for e in incoming[var])
            refined[var] = _digest(" ".join([colors[var], *out, *into]))
        colors = refined
        if len(set(colors.values())) == classes:
            break
        classes = len(set(colors.values()))
    return colors


def _orderings(edges: list[Edge], colors: dict[str, str]) -> Iterator[list[Edge]]:
    """Every child order consistent with `(role, color)`; only tied runs are permuted."""
    ordered = sorted(edges, key=lambda e: (e.role, colors[e.target]))
    runs: list[list[Edge]] = []
    for e in ordered:
        if runs and (runs[-1][0].role, colors[runs[-1][0].target]) == (e.role, colors[e.target]):
            runs[-1].append(e)
        else:
            runs.append([e])
    for choice in product(*(permutations(run) for run in runs)):
        yield [e for run in choice for e in run]


def canonical_form(graph: AmrGraph) -> str:
    """
    Encodes `graph` so that graphs differing only in variable names (and in the stored order of
    sibling edges) encode identically.

    Args:
        graph (AmrGraph): a valid graph

    Returns:
        (str): the canonical encoding

    """
    index = outgoing_edges(graph)
    attributes = {var: _attribute_key(graph, var) for var in graph.nodes}
    colors = _colors(graph, attributes)
    best: list[str | None] = [None]

    # `pending` holds literal text and ("visit", var) items, next item last
    def search(pending: list, numbering: dict[str, int], out: list[str]) -> None:
        while pending:
            item = pending.pop()
            if isinstance(item, str):
                out.append(item)
                continue
            var = item[1]
            if var in numbering:
                out.append(f"#{numbering[var]}")
                continue
            numbering[var] = len(numbering)
            out.append(f"({numbering[var]} / {graph.nodes[var]} [{attributes[var]}]")
            text = "".join(out)
            if best[0] is not None and text > best[0][: len(text)]:
                return
            orders = list(_orderings(index.get(var, []), colors))
            for order in orders:
                tail: list = [")"]
                for e in reversed(order):
                    tail.extend([("visit", e.target), f" {e.role} "])
                if len(orders) == 1:
                    pending.extend(tail)
                    break
                search([*pending, *tail], dict(numbering), list(out))
            else:
                return
        text = "".join(out)
        if best[0] is None or text < best[0]:
            best[0] = text

    search([("visit", graph.root)], {}, [])
    assert best[0] is not None
    return best[0]


def is_isomorphic(a: AmrGraph, b: AmrGraph) -> bool:
    """True when `a` and `b` are the same graph up to variable renaming."""
    return canonical_form(a) == canonical_form(b)

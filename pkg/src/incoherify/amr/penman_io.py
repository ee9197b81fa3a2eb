"""
PENMAN text <-> `AmrGraph`. Tokenizing and tree building are delegated to the `penman`
package; this module maps `penman.Tree` branches onto nodes, edges and constant attributes and
enforces the graph invariants on the way in.
"""

from __future__ import annotations

import logging
from typing import Literal

import networkx as nx
import penman
from penman.exceptions import PenmanError
from penman.tree import Tree

from incoherify.amr.graph import (
    AmrGraph,
    Attribute,
    Constant,
    Edge,
    normalized,
    outgoing_edges,
    validate,
)
from incoherify.errors import (
    AmrSyntaxError,
    CycleError,
    DuplicateVariableError,
    InvalidGraphError,
    UndeclaredVariableError,
)

__all__ = ["INDENT", "PenmanStyle", "parse", "serialize"]

logger = logging.getLogger(__name__)

PenmanStyle = Literal["multiline", "single-line"]

INDENT = 6
"""Spaces added per nesting level in multiline output."""

_Node = tuple[str, list[tuple[str, object]]]


def _check_parentheses(text: str) -> None:
    depth = 0
    closed_at: int | None = None
    in_string = False
    escaped = False
    for i, ch in enumerate(text):
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if closed_at is not None and not ch.isspace():
            raise AmrSyntaxError(f"unexpected content after the graph at offset {i}")
        if ch == '"':
            in_string = True
        elif ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise AmrSyntaxError(f"unbalanced ')' at offset {i}")
            if depth == 0:
                closed_at = i
        elif depth == 0 and not ch.isspace():
            raise AmrSyntaxError(f"expected '(' at offset {i}, found {ch!r}")
    if in_string:
        raise AmrSyntaxError("unterminated string literal")
    if depth > 0:
        raise AmrSyntaxError(f"unbalanced parentheses: {depth} unclosed '('")
    if closed_at is None:
        raise AmrSyntaxError("empty input")


def _unquote(token: str) -> str:
    body = token[1:-1]
    out: list[str] = []
    chars = iter(body)
    for ch in chars:
        if ch == "\\":
            out.append(next(chars, ""))
        else:
            out.append(ch)
    return "".join(out)


def _declarations(node: _Node, declared: dict[str, str]) -> None:
    var, branches = node
    if not var:
        raise AmrSyntaxError("node without a variable")
    if not branches or branches[0][0] != "/" or not branches[0][1]:
        raise AmrSyntaxError(f"missing concept after '/' for variable {var!r}")
    if var in declared:
        raise DuplicateVariableError(f"variable {var!r} is declared more than once")
    declared[var] = str(branches[0][1])
    for role, target in branches[1:]:
        if role == "/":
            raise AmrSyntaxError(f"variable {var!r} has more than one concept")
        if isinstance(target, tuple):
            _declarations(target, declared)


def parse(text: str) -> AmrGraph:
    """
    Parses one parenthesized PENMAN expression.

    Bare tokens naming a declared variable become (reentrant) edges; quoted strings, numbers,
    `-` and the symbolic constants become attributes.

    Args:
        text (str): PENMAN text, single- or multi-line

    Returns:
        (AmrGraph): a valid graph in normal form

    Raises:
        AmrSyntaxError: unbalanced parentheses, missing concept, stray tokens
        DuplicateVariableError: a variable declared twice
        UndeclaredVariableError: a bare token that is neither a constant nor declared
        CycleError: the edges form a cycle

    """
    _check_parentheses(text)
    try:
        tree = penman.parse(text)
    except PenmanError as e:
        raise AmrSyntaxError(str(e)) from e

    declared: dict[str, str] = {}
    _declarations(tree.node, declared)

    edges: list[Edge] = []
    attributes: list[Attribute] = []

    def walk(node: _Node) -> None:
        var, branches = node
        for role, target in branches[1:]:
            if target is None:
                raise AmrSyntaxError(f"role {role} of {var!r} has no value")
            if isinstance(target, tuple):
                edges.append(Edge(var, role, target[0]))
                walk(target)
                continue
            token = str(target)
            if token.startswith('"'):
                attributes.append(Attribute(var, role, Constant.text(_unquote(token))))
            elif token in declared:
                edges.append(Edge(var, role, token))
            elif (constant := Constant.classify(token)) is not None:
                attributes.append(Attribute(var, role, constant))
            else:
                raise UndeclaredVariableError(
                    f"{token!r} under {var} {role} is not a declared variable"
                )

    walk(tree.node)

    g = nx.DiGraph()
    g.add_edges_from((e.source, e.target) for e in edges)
    try:
        cycle = nx.find_cycle(g)
    except nx.NetworkXNoCycle:
        pass
    else:
        raise CycleError("cycle " + " -> ".join(u for u, _ in cycle))

    graph = AmrGraph(
        root=tree.node[0],
        nodes=declared,
        edges=tuple(edges),
        attributes=tuple(attributes),
    )
    return normalized(graph)


def serialize(graph: AmrGraph, style: PenmanStyle = "multiline") -> str:
    """
    Renders `graph` as PENMAN. Output is deterministic: a node's attributes precede its edges,
    both in stored order, and every node is declared at its first depth-first visit; later
    references print as bare variables.

    Args:
        graph (AmrGraph): a graph passing `validate`
        style (PenmanStyle): `multiline` indents nested nodes by `INDENT` spaces per level;
            `single-line` puts everything on one line

    Returns:
        (str): PENMAN text

    Raises:
        InvalidGraphError: `graph` fails validation

    """
    report = validate(graph)
    if not report.ok:
        raise InvalidGraphError(f"cannot serialize an invalid graph: {report.summary()}", report)

    index = outgoing_edges(graph)
    attributes: dict[str, list[Attribute]] = {}
    for attribute in graph.attributes:
        attributes.setdefault(attribute.source, []).append(attribute)
    seen: set[str] = set()

    def build(var: str) -> _Node:
        seen.add(var)
        branches: list[tuple[str, object]] = [("/", graph.nodes[var])]
        branches.extend((a.role, a.value.render()) for a in attributes.get(var, []))
        for edge in index.get(var, []):
            if edge.target in seen:
                branches.append((edge.role, edge.target))
            else:
                branches.append((edge.role, build(edge.target)))
        return (var, branches)

    tree = Tree(build(graph.root))
    return penman.format(tree, indent=INDENT if style == "multiline" else None)

"""
The `AmrGraph` value type and the read-only queries over it: `validate`, `depth`,
`find_nodes` and traversal helpers.

An `AmrGraph` is a plain container and may be built in an invalid state (that is what
`validate` is for). Graphs coming out of `parse` or any edit in `incoherify.amr.edit` are valid
and in *normal form*: edges and attributes grouped by source, sources in depth-first discovery
order, per-source order preserved. Normal form is what makes `parse(serialize(g)) == g` hold
field for field.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Literal, NamedTuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, model_validator

__all__ = [
    "DEFAULT_PRONOUNS",
    "MULTI_SENTENCE",
    "UNKNOWN",
    "AmrGraph",
    "Attribute",
    "ConceptIn",
    "Constant",
    "Edge",
    "IncomingRole",
    "IsPronoun",
    "IsUnknown",
    "NodePredicate",
    "ValidationReport",
    "Violation",
    "ViolationCode",
    "depth",
    "find_nodes",
    "is_predicate_concept",
    "node_depths",
    "normalized",
    "outgoing_edges",
    "subtree_variables",
    "concepts",
    "traverse",
    "validate",
]

logger = logging.getLogger(__name__)

MULTI_SENTENCE = "multi-sentence"
UNKNOWN = "amr-unknown"

DEFAULT_PRONOUNS: frozenset[str] = frozenset({"i", "you", "he", "she", "it", "we", "they"})
"""Subjective-form pronoun concepts. Demonstratives such as `that` are deliberately absent."""

ROLE_RE = re.compile(r"^:[^\s()/:\"]+$")
_NUMBER_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_PREDICATE_RE = re.compile(r"^[^\s\"]+-\d{2}$")

SYMBOLIC_CONSTANTS: frozenset[str] = frozenset(
    {"+", "imperative", "expressive", "interrogative"}
)
"""Bare (unquoted) AMR constants that are never variables."""


def is_predicate_concept(concept: str) -> bool:
    """True for PropBank-style framesets shaped `lemma-NN` (e.g. `watch-01`)."""
    return bool(_PREDICATE_RE.match(concept))


class Constant(BaseModel):
    """Attribute value: quoted text, a number, the `-` polarity marker, or a bare symbol."""

    kind: Literal["text", "number", "minus", "symbol"]
    value: str

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_payload(self) -> Constant:
        if self.kind == "minus" and self.value != "-":
            raise ValueError("a minus-marker constant must be exactly '-'")
        if self.kind == "number" and not _NUMBER_RE.match(self.value):
            raise ValueError(f"{self.value!r} is not a number")
        return self

    @classmethod
    def minus(cls) -> Constant:
        return cls(kind="minus", value="-")

    @classmethod
    def text(cls, value: str) -> Constant:
        return cls(kind="text", value=value)

    @classmethod
    def classify(cls, token: str) -> Constant | None:
        """
        Classifies an unquoted PENMAN token that is not a variable.

        Returns:
            (Constant | None): the constant, or `None` when the token can only be read as a
                (possibly undeclared) variable

        """
        if token == "-":
            return cls.minus()
        if _NUMBER_RE.match(token):
            return cls(kind="number", value=token)
        if token in SYMBOLIC_CONSTANTS:
            return cls(kind="symbol", value=token)
        return None

    def render(self) -> str:
        """PENMAN token for this constant."""
        if self.kind == "text":
            escaped = self.value.replace("\\", "\\\\").replace('"', '\\"')
            return f'"{escaped}"'
        return self.value


class Edge(NamedTuple):
    source: str
    role: str
    target: str


class Attribute(NamedTuple):
    source: str
    role: str
    value: Constant


class AmrGraph(BaseModel):
    """
    Rooted, directed, acyclic semantic graph. `nodes` maps variable -> concept; `edges` link
    variables; `attributes` hang constants off variables.
    """

    root: str
    nodes: dict[str, str]
    edges: tuple[Edge, ...] = ()
    attributes: tuple[Attribute, ...] = ()

    model_config = ConfigDict(frozen=True)

    def concept(self, var: str) -> str:
        return self.nodes[var]

    @property
    def root_concept(self) -> str:
        return self.nodes[self.root]

    @property
    def is_multi_sentence(self) -> bool:
        return self.nodes.get(self.root) == MULTI_SENTENCE

    def edges_from(self, var: str) -> list[Edge]:
        return [e for e in self.edges if e.source == var]

    def edges_into(self, var: str) -> list[Edge]:
        return [e for e in self.edges if e.target == var]

    def attributes_of(self, var: str) -> list[Attribute]:
        return [a for a in self.attributes if a.source == var]

    def has_polarity(self, var: str) -> bool:
        return any(
            a.role == ":polarity" and a.value.kind == "minus"
            for a in self.attributes_of(var)
        )

    def to_networkx(self) -> nx.MultiDiGraph:
        """Edge structure as a `networkx.MultiDiGraph` (roles kept as the `role` edge key)."""
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.nodes)
        for source, role, target in self.edges:
            g.add_edge(source, target, key=role)
        return g


class ViolationCode(StrEnum):
    ROOT_UNDECLARED = "ROOT_UNDECLARED"
    UNDECLARED_SOURCE = "UNDECLARED_SOURCE"
    UNDECLARED_TARGET = "UNDECLARED_TARGET"
    UNDECLARED_ATTRIBUTE_SOURCE = "UNDECLARED_ATTRIBUTE_SOURCE"
    EMPTY_CONCEPT = "EMPTY_CONCEPT"
    BAD_ROLE = "BAD_ROLE"
    UNREACHABLE = "UNREACHABLE"
    CYCLE = "CYCLE"


class Violation(NamedTuple):
    code: ViolationCode
    subject: str
    """Offending variable or token."""
    message: str


class ValidationReport(BaseModel):
    violations: tuple[Violation, ...] = ()

    model_config = ConfigDict(frozen=True)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def codes(self) -> set[ViolationCode]:
        return {v.code for v in self.violations}

    def summary(self) -> str:
        return "; ".join(f"{v.code}({v.subject}): {v.message}" for v in self.violations)


def validate(graph: AmrGraph) -> ValidationReport:
    """
    Checks every `AmrGraph` invariant and reports each violation with a stable code. Never
    raises and never mutates `graph`.

    Args:
        graph (AmrGraph): graph to check

    Returns:
        (ValidationReport): `ok` iff no violations were found

    """
    found: list[Violation] = []
    declared = graph.nodes

    if graph.root not in declared:
        found.append(
            Violation(ViolationCode.ROOT_UNDECLARED, graph.root, "root is not declared")
        )
    for var, concept in declared.items():
        if not concept:
            found.append(Violation(ViolationCode.EMPTY_CONCEPT, var, "empty concept"))

    for source, role, target in graph.edges:
        if source not in declared:
            found.append(
                Violation(
                    ViolationCode.UNDECLARED_SOURCE,
                    source,
                    f"edge {role} starts at an undeclared variable",
                )
            )
        if target not in declared:
            found.append(
                Violation(
                    ViolationCode.UNDECLARED_TARGET,
                    target,
                    f"edge {source} {role} targets an undeclared variable",
                )
            )
        if not ROLE_RE.match(role):
            found.append(Violation(ViolationCode.BAD_ROLE, role, "malformed role label"))

    for source, role, _ in graph.attributes:
        if source not in declared:
            found.append(
                Violation(
                    ViolationCode.UNDECLARED_ATTRIBUTE_SOURCE,
                    source,
                    f"attribute {role} on an undeclared variable",
                )
            )
        if not ROLE_RE.match(role):
            found.append(Violation(ViolationCode.BAD_ROLE, role, "malformed role label"))

    g = nx.DiGraph()
    g.add_nodes_from(declared)
    g.add_edges_from(
        (e.source, e.target)
        for e in graph.edges
        if e.source in declared and e.target in declared
    )

    if graph.root in declared:
        reachable = nx.descendants(g, graph.root) | {graph.root}
        for var in declared:
            if var not in reachable:
                found.append(
                    Violation(
                        ViolationCode.UNREACHABLE, var, "not reachable from the root"
                    )
                )

    try:
        cycle = nx.find_cycle(g)
    except nx.NetworkXNoCycle:
        pass
    else:
        path = " -> ".join(str(u) for u, _ in cycle)
        found.append(Violation(ViolationCode.CYCLE, cycle[0][0], f"cycle {path}"))

    return ValidationReport(violations=tuple(found))


def outgoing_edges(graph: AmrGraph) -> dict[str, list[Edge]]:
    """Edges grouped by source variable, stored order preserved."""
    index: dict[str, list[Edge]] = {var: [] for var in graph.nodes}
    for edge in graph.edges:
        index.setdefault(edge.source, []).append(edge)
    return index


def traverse(graph: AmrGraph) -> Iterator[tuple[str, Edge | None]]:
    """
    Depth-first pre-order walk from the root, children in stored edge order, each node
    yielded once together with the edge it was first reached by (`None` for the root). This
    is also the order `serialize` declares variables in.
    """
    index = outgoing_edges(graph)
    seen: set[str] = set()
    stack: list[tuple[str, Edge | None]] = [(graph.root, None)]
    while stack:
        var, via = stack.pop()
        if var in seen:
            continue
        seen.add(var)
        yield var, via
        for edge in reversed(index.get(var, [])):
            if edge.target not in seen:
                stack.append((edge.target, edge))


def normalized(graph: AmrGraph) -> AmrGraph:
    """
    Returns `graph` in normal form: nodes, edges and attributes grouped by source in
    depth-first discovery order. Items on undiscovered sources keep their relative order at
    the end.
    """
    order = [var for var, _ in traverse(graph)]
    position = {var: i for i, var in enumerate(order)}
    tail = len(order)
    nodes = {var: graph.nodes[var] for var in order if var in graph.nodes}
    nodes.update((var, c) for var, c in graph.nodes.items() if var not in nodes)
    edges = sorted(graph.edges, key=lambda e: position.get(e.source, tail))
    attributes = sorted(graph.attributes, key=lambda a: position.get(a.source, tail))
    return AmrGraph(
        root=graph.root,
        nodes=nodes,
        edges=tuple(edges),
        attributes=tuple(attributes),
    )


def node_depths(graph: AmrGraph) -> dict[str, int]:
    """
    Longest-path distance (in edges) from the root to every reachable node. Attributes do not
    count. Requires an acyclic graph.
    """
    g = nx.DiGraph()
    g.add_nodes_from(graph.nodes)
    g.add_edges_from((e.source, e.target) for e in graph.edges)
    reachable = nx.descendants(g, graph.root) | {graph.root}
    sub = g.subgraph(reachable)
    depths = {graph.root: 0}
    for var in nx.topological_sort(sub):
        if var not in depths:
            continue
        for child in sub.successors(var):
            depths[child] = max(depths.get(child, 0), depths[var] + 1)
    return depths


def depth(graph: AmrGraph) -> int:
    """Maximum number of edges on any root-to-node path; 0 for a single node."""
    return max(node_depths(graph).values())


class NodePredicate:
    """Base for `find_nodes` predicates: called with the graph and a variable."""

    def __call__(self, graph: AmrGraph, var: str) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class ConceptIn(NodePredicate):
    concepts: frozenset[str]

    def __call__(self, graph: AmrGraph, var: str) -> bool:
        return graph.nodes[var] in self.concepts


@dataclass(frozen=True)
class IncomingRole(NodePredicate):
    """
    Nodes targeted by a numbered role with `prefix`: `IncomingRole(":ARG")` matches `:ARG0`,
    `:ARG1`, ... but not inverse roles such as `:ARG0-of`.
    """

    prefix: Literal[":ARG", ":op", ":snt"]

    def __call__(self, graph: AmrGraph, var: str) -> bool:
        pattern = re.compile(rf"^{re.escape(self.prefix)}\d+$")
        return any(pattern.match(e.role) for e in graph.edges_into(var))


@dataclass(frozen=True)
class IsUnknown(NodePredicate):
    def __call__(self, graph: AmrGraph, var: str) -> bool:
        return graph.nodes[var] == UNKNOWN


@dataclass(frozen=True)
class IsPronoun(NodePredicate):
    inventory: frozenset[str] = field(default=DEFAULT_PRONOUNS)

    def __call__(self, graph: AmrGraph, var: str) -> bool:
        return graph.nodes[var] in self.inventory


def find_nodes(
    graph: AmrGraph, predicate: NodePredicate | Callable[[AmrGraph, str], bool]
) -> list[str]:
    """
    Variables satisfying `predicate`, in depth-first traversal order (edge order).

    Args:
        graph (AmrGraph): graph to search
        predicate (NodePredicate): e.g. `IsUnknown()`, `IsPronoun()`, `IncomingRole(":ARG")`

    Returns:
        (list[str]): matching variables, possibly empty

    """
    return [var for var, _ in traverse(graph) if predicate(graph, var)]


def subtree_variables(graph: AmrGraph, at: str) -> set[str]:
    """`at` plus every node reachable from it over edges."""
    g = nx.DiGraph()
    g.add_nodes_from(graph.nodes)
    g.add_edges_from((e.source, e.target) for e in graph.edges)
    return nx.descendants(g, at) | {at}


def concepts(graph: AmrGraph, variables: Iterable[str] | None = None) -> list[str]:
    """Concepts of `variables` (all nodes, traversal order, when omitted)."""
    if variables is None:
        variables = [var for var, _ in traverse(graph)]
    return [graph.nodes[v] for v in variables]

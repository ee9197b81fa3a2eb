"""
AMR graphs: the `AmrGraph` value type, PENMAN I/O, validation and structural edits.
"""

from incoherify.amr import canonical, edit, graph, penman_io
from incoherify.amr.canonical import canonical_form, is_isomorphic
from incoherify.amr.edit import (
    clone_subgraph,
    fresh_variable,
    insert_sentence_subgraph,
    remove_subtree,
    replace_concept,
    snt_index,
    toggle_polarity,
)
from incoherify.amr.graph import (
    DEFAULT_PRONOUNS,
    MULTI_SENTENCE,
    UNKNOWN,
    AmrGraph,
    Attribute,
    ConceptIn,
    Constant,
    Edge,
    IncomingRole,
    IsPronoun,
    IsUnknown,
    NodePredicate,
    ValidationReport,
    Violation,
    ViolationCode,
    depth,
    find_nodes,
    is_predicate_concept,
    node_depths,
    normalized,
    subtree_variables,
    traverse,
    validate,
)
from incoherify.amr.penman_io import PenmanStyle, parse, serialize

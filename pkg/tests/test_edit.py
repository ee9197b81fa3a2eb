"""Tests for structural AMR edits."""

import pytest

from incoherify.amr import (
    Edge,
    clone_subgraph,
    fresh_variable,
    insert_sentence_subgraph,
    is_isomorphic,
    parse,
    remove_subtree,
    replace_concept,
    snt_index,
    toggle_polarity,
    validate,
)
from incoherify.errors import EditError, InvalidGraphError, UndeclaredVariableError
from incoherify.examples import worked_example

WANT = "(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))"


class TestFreshVariable:
    def test_first_letter_when_free(self):
        assert fresh_variable("orange", set()) == "o"

    def test_numbers_collisions(self):
        assert fresh_variable("orange", {"o"}) == "o2"
        assert fresh_variable("orange", {"o", "o2"}) == "o3"

    def test_non_letters_fall_back_to_x(self):
        assert fresh_variable("9lives", set()) == "x"


class TestSntIndex:
    def test_reads_sentence_roles(self):
        assert snt_index(":snt3") == 3
        assert snt_index(":ARG0") is None


class TestRemoveSubtree:
    def test_removes_the_subtree(self):
        graph = parse("(h / have-concession-91 :ARG1 (o / orange :domain (h2 / he)))")
        result = remove_subtree(graph, "o")
        assert result.nodes == {"h": "have-concession-91"}
        assert result.edges == ()

    def test_keeps_descendants_still_referenced(self):
        result = remove_subtree(parse(WANT), "g")
        assert set(result.nodes) == {"w", "b"}
        assert result.edges == (Edge("w", ":ARG0", "b"),)

    def test_removing_a_shared_node_drops_every_edge_into_it(self):
        result = remove_subtree(parse(WANT), "b")
        assert set(result.nodes) == {"w", "g"}
        assert result.edges == (Edge("w", ":ARG1", "g"),)

    def test_renumbers_sentence_roles(self):
        amr = worked_example().utterances[2].amr
        result = remove_subtree(amr, "h2")
        assert validate(result).ok
        assert [(e.role, e.target) for e in result.edges_from("m")] == [
            (":snt1", "ii"),
            (":snt2", "w"),
        ]
        assert not {"h2", "g", "h3", "c2", "a2"} & set(result.nodes)

    def test_root_cannot_be_removed(self):
        with pytest.raises(EditError):
            remove_subtree(parse(WANT), "w")

    def test_undeclared_variable(self):
        with pytest.raises(UndeclaredVariableError):
            remove_subtree(parse(WANT), "zz")

    def test_input_is_untouched(self):
        graph = parse(WANT)
        remove_subtree(graph, "g")
        assert graph == parse(WANT)


class TestCloneSubgraph:
    def test_renames_away_from_the_source(self):
        graph = parse(WANT)
        copy = clone_subgraph(graph, "g")
        assert not set(copy.nodes) & set(graph.nodes)
        assert is_isomorphic(copy, parse("(g / go-02 :ARG0 (b / boy))"))

    def test_respects_avoid(self):
        copy = clone_subgraph(parse("(b / boy)"), "b", avoid={"b2"})
        assert copy.root == "b3"


class TestInsertSentenceSubgraph:
    def test_wraps_a_single_sentence_host(self):
        host = parse("(h / have-concession-91 :ARG1 (o / orange))")
        result = insert_sentence_subgraph(host, parse("(h / hate-01 :ARG0 (ii / i))"))
        assert validate(result).ok
        assert result.root_concept == "multi-sentence"
        snts = {e.role: e.target for e in result.edges_from(result.root)}
        assert result.nodes[snts[":snt1"]] == "have-concession-91"
        assert result.nodes[snts[":snt2"]] == "hate-01"
        assert snts[":snt2"] != "h"

    def test_appends_to_a_multi_sentence_host(self):
        host = worked_example().utterances[1].amr
        result = insert_sentence_subgraph(host, parse("(s / sleep-01)"))
        roles = [e.role for e in result.edges_from("m")]
        assert roles == [":snt1", ":snt2", ":snt3", ":snt4"]
        assert len(result.nodes) == len(host.nodes) + 1

    def test_rejects_invalid_inputs(self):
        bad = parse("(s / sleep-01)").model_copy(update={"root": "nope"})
        with pytest.raises(InvalidGraphError):
            insert_sentence_subgraph(parse(WANT), bad)


class TestConceptAndPolarity:
    def test_replace_concept(self):
        result = replace_concept(parse(WANT), "b", "girl")
        assert result.nodes["b"] == "girl"
        assert result.edges == parse(WANT).edges

    def test_replace_with_empty_concept(self):
        with pytest.raises(EditError):
            replace_concept(parse(WANT), "b", "")

    def test_toggle_adds_then_removes(self):
        graph = parse(WANT)
        negated = toggle_polarity(graph, "g")
        assert negated.has_polarity("g")
        assert toggle_polarity(negated, "g") == graph

    def test_toggle_undeclared(self):
        with pytest.raises(UndeclaredVariableError):
            toggle_polarity(parse(WANT), "q")

"""
Conversation value types: `Utterance`, `Conversation`, and the `ManipulationRecord` provenance
attached to manipulated conversations.

`Utterance.amr` accepts either an `AmrGraph` or PENMAN text (parsed on validation) and always
serializes as single-line PENMAN, so a `Conversation` dumps straight to one corpus line.
"""

from __future__ import annotations

import logging
from enum import StrEnum
from typing import Annotated, Any, Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_serializer,
    field_validator,
)

from incoherify.amr import MULTI_SENTENCE, AmrGraph, parse, serialize, snt_index, validate
from incoherify.errors import InvalidGraphError

__all__ = [
    "ConceptReplacement",
    "ContradictionParams",
    "Conversation",
    "Label",
    "ManipulationRecord",
    "ManipulationStep",
    "Negation",
    "Permutation",
    "StepParameters",
    "SubtreeRemoval",
    "Utterance",
    "UtteranceDrop",
    "UtteranceSplice",
    "sentence_units",
]

logger = logging.getLogger(__name__)


class Label(StrEnum):
    COHERENT = "coherent"
    INCOHERENT = "incoherent"


class Utterance(BaseModel):
    """One dialogue turn."""

    speaker: Annotated[str, Field(min_length=1)]
    text: str | None = None
    """Surface text; carried through manipulations untouched."""
    amr: AmrGraph

    model_config = ConfigDict(frozen=True)

    @field_validator("amr", mode="before")
    @classmethod
    def _parse_penman(cls, value: Any) -> Any:
        if isinstance(value, str):
            return parse(value)
        return value

    @field_validator("amr", mode="after")
    @classmethod
    def _require_valid(cls, value: AmrGraph) -> AmrGraph:
        report = validate(value)
        if not report.ok:
            raise InvalidGraphError(report.summary(), report)
        return value

    @field_serializer("amr")
    def _to_penman(self, amr: AmrGraph) -> str:
        return serialize(amr, style="single-line")


class Negation(BaseModel):
    """How a copied sentence unit's head concept is contradicted."""

    mode: Literal["antonym", "polarity"]
    concept: str | None = None
    """Antonym replacing the head concept (`antonym` mode only)."""

    model_config = ConfigDict(frozen=True)


class ContradictionParams(BaseModel):
    kind: Literal["contradiction"] = "contradiction"
    source_index: int
    """Utterance the sentence units are copied from."""
    units: tuple[int, ...]
    """`:snt` indices (1-based) of the copied units, in copy order."""
    negations: dict[int, Negation]
    """Per copied unit; units without an entry are copied verbatim."""

    model_config = ConfigDict(frozen=True)


class ConceptReplacement(BaseModel):
    kind: Literal["replace_concepts"] = "replace_concepts"
    replacements: dict[str, str]
    """Variable -> new concept."""

    model_config = ConfigDict(frozen=True)


class SubtreeRemoval(BaseModel):
    kind: Literal["remove_subtrees"] = "remove_subtrees"
    strategy: Literal["question", "deepest", "arguments"]
    variables: tuple[str, ...]
    """Subtree roots removed, in removal order."""

    model_config = ConfigDict(frozen=True)


class UtteranceDrop(BaseModel):
    kind: Literal["drop_utterance"] = "drop_utterance"
    strategy: Literal["question"] = "question"

    model_config = ConfigDict(frozen=True)


class Permutation(BaseModel):
    kind: Literal["permutation"] = "permutation"
    order: tuple[int, ...]
    """`order[i]` is the original index of the utterance now at position `i`."""

    model_config = ConfigDict(frozen=True)


class UtteranceSplice(BaseModel):
    kind: Literal["splice"] = "splice"
    mode: Literal["insert", "replace"]
    position: int
    donor_id: str
    utterance: Utterance

    model_config = ConfigDict(frozen=True)


StepParameters = Annotated[
    ContradictionParams
    | ConceptReplacement
    | SubtreeRemoval
    | UtteranceDrop
    | Permutation
    | UtteranceSplice,
    Field(discriminator="kind"),
]


class ManipulationStep(BaseModel):
    """One applied manipulation, with everything needed to re-apply it without an rng."""

    name: str
    utterance_index: int
    """0-based index of the utterance edited (the target, for contradiction)."""
    touched: tuple[str, ...] = ()
    """Variables created, rewritten or removed in that utterance."""
    parameters: StepParameters

    model_config = ConfigDict(frozen=True)


class ManipulationRecord(BaseModel):
    conversation_id: str
    seed: Annotated[int, Field(ge=0, lt=1 << 64)]
    """Per-conversation seed the steps were drawn with."""
    steps: tuple[ManipulationStep, ...] = ()

    model_config = ConfigDict(frozen=True)

    @property
    def names(self) -> list[str]:
        return [step.name for step in self.steps]


class Conversation(BaseModel):
    """An ordered, nonempty sequence of utterances. Speakers need not alternate."""

    id: Annotated[str, Field(min_length=1)]
    label: Label | None = None
    utterances: Annotated[tuple[Utterance, ...], Field(min_length=1)]
    record: ManipulationRecord | None = None

    model_config = ConfigDict(frozen=True)

    @property
    def speakers(self) -> list[str]:
        return [u.speaker for u in self.utterances]

    def node_count(self) -> int:
        return sum(len(u.amr.nodes) for u in self.utterances)

    def edge_count(self) -> int:
        return sum(len(u.amr.edges) for u in self.utterances)

    def with_utterance(self, index: int, amr: AmrGraph) -> Conversation:
        """Copy with utterance `index` holding `amr`."""
        utterances = list(self.utterances)
        utterances[index] = utterances[index].model_copy(update={"amr": amr})
        return self.model_copy(update={"utterances": tuple(utterances)})


def sentence_units(utterance: Utterance | AmrGraph) -> list[tuple[int, str]]:
    """
    The sentence units of an utterance as `(snt index, variable)` pairs: the `:sntK` children
    of a multi-sentence root in index order, or `[(1, root)]` for a single sentence.
    """
    amr = utterance.amr if isinstance(utterance, Utterance) else utterance
    if amr.nodes.get(amr.root) != MULTI_SENTENCE:
        return [(1, amr.root)]
    units = [
        (k, e.target)
        for e in amr.edges_from(amr.root)
        if (k := snt_index(e.role)) is not None
    ]
    return sorted(units)

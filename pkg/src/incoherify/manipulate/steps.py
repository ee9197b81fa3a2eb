"""
Deterministic appliers for recorded manipulation steps. Planners in `semantic` and `baseline`
draw their choices from an `Rng` and hand the resulting `ManipulationStep` to `apply_step`, so
a fresh run and a replay from a `ManipulationRecord` go through the same code.
"""

from __future__ import annotations

import logging

from incoherify.amr import (
    AmrGraph,
    clone_subgraph,
    insert_sentence_subgraph,
    remove_subtree,
    replace_concept,
    toggle_polarity,
)
from incoherify.dialogue.model import (
    ConceptReplacement,
    ContradictionParams,
    Conversation,
    ManipulationStep,
    Permutation,
    StepParameters,
    SubtreeRemoval,
    UtteranceDrop,
    UtteranceSplice,
    sentence_units,
)
from incoherify.errors import EditError

__all__ = ["apply_parameters", "apply_step", "make_step"]

logger = logging.getLogger(__name__)


def _contradiction(conversation: Conversation, index: int, p: ContradictionParams) -> Conversation:
    source = conversation.utterances[p.source_index].amr
    units = dict(sentence_units(source))
    target = conversation.utterances[index].amr
    for k in p.units:
        if k not in units:
            raise EditError(f"utterance {p.source_index} has no sentence unit :snt{k}")
        copy = clone_subgraph(source, units[k])
        negation = p.negations.get(k)
        if negation is not None and negation.mode == "antonym":
            if not negation.concept:
                raise EditError("an antonym negation needs a concept")
            copy = replace_concept(copy, copy.root, negation.concept)
        elif negation is not None:
            copy = toggle_polarity(copy, copy.root)
        target = insert_sentence_subgraph(target, copy)
    return conversation.with_utterance(index, target)


def _remove(amr: AmrGraph, variables: tuple[str, ...]) -> AmrGraph:
    for var in variables:
        # an earlier removal may already have taken this one with it
        if var in amr.nodes:
            amr = remove_subtree(amr, var)
    return amr


def apply_parameters(
    conversation: Conversation, index: int, parameters: StepParameters
) -> Conversation:
    """
    Applies one step's parameters to utterance `index` (or to the utterance sequence, for the
    text-level kinds). Labels and records are left as they are.
    """
    match parameters:
        case ContradictionParams():
            return _contradiction(conversation, index, parameters)
        case ConceptReplacement(replacements=replacements):
            amr = conversation.utterances[index].amr
            for var, concept in replacements.items():
                amr = replace_concept(amr, var, concept)
            return conversation.with_utterance(index, amr)
        case SubtreeRemoval(variables=variables):
            amr = _remove(conversation.utterances[index].amr, variables)
            return conversation.with_utterance(index, amr)
        case UtteranceDrop():
            utterances = conversation.utterances[:index] + conversation.utterances[index + 1 :]
            return conversation.model_copy(update={"utterances": utterances})
        case Permutation(order=order):
            utterances = tuple(conversation.utterances[i] for i in order)
            return conversation.model_copy(update={"utterances": utterances})
        case UtteranceSplice(mode="insert", position=position, utterance=utterance):
            u = conversation.utterances
            return conversation.model_copy(
                update={"utterances": u[:position] + (utterance,) + u[position:]}
            )
        case UtteranceSplice(position=position, utterance=utterance):
            u = conversation.utterances
            return conversation.model_copy(
                update={"utterances": u[:position] + (utterance,) + u[position + 1 :]}
            )
    raise TypeError(f"unsupported step parameters {type(parameters).__name__}")


def make_step(
    conversation: Conversation, name: str, index: int, parameters: StepParameters
) -> tuple[Conversation, ManipulationStep]:
    """
    Applies `parameters` and builds the matching `ManipulationStep`, with `touched` set to the
    variables the step created, rewrote or removed in utterance `index`.
    """
    after = apply_parameters(conversation, index, parameters)
    match parameters:
        case ContradictionParams():
            before = conversation.utterances[index].amr.nodes
            touched = tuple(v for v in after.utterances[index].amr.nodes if v not in before)
        case ConceptReplacement(replacements=replacements):
            touched = tuple(replacements)
        case SubtreeRemoval():
            remaining = after.utterances[index].amr.nodes
            touched = tuple(
                v for v in conversation.utterances[index].amr.nodes if v not in remaining
            )
        case UtteranceDrop():
            touched = tuple(conversation.utterances[index].amr.nodes)
        case _:
            touched = ()
    step = ManipulationStep(
        name=name, utterance_index=index, touched=touched, parameters=parameters
    )
    return after, step


def apply_step(conversation: Conversation, step: ManipulationStep) -> Conversation:
    """Re-applies a recorded step."""
    logger.debug(f"Replaying {step.name} on utterance {step.utterance_index}")
    return apply_parameters(conversation, step.utterance_index, step.parameters)

"""
Composition of manipulations into a negative example: the seeded semantic pipeline, the
baseline mix, and `replay` for re-running a `ManipulationRecord`.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

from incoherify.config import BaselineConfig, Manipulation, ManipulationConfig
from incoherify.dialogue.model import Conversation, Label, ManipulationRecord, ManipulationStep
from incoherify.errors import NotApplicableError
from incoherify.knowledge import AntonymLexicon, bundled_lexicon
from incoherify.manipulate.baseline import plan_primitive
from incoherify.manipulate.rng import Rng, conversation_seed
from incoherify.manipulate.semantic import (
    ManipulationResult,
    contradict,
    coref_inconsistency,
    decrease_engagement,
    irrelevancy,
)
from incoherify.manipulate.steps import apply_step

__all__ = [
    "apply_baseline",
    "apply_manipulation",
    "apply_pipeline",
    "draw_plan",
    "replay",
]

logger = logging.getLogger(__name__)

_BASELINE_STREAM = 0xB5E1_1AE5_0000_0001
"""Mixed into baseline seeds so a baseline negative never reuses the semantic draws."""


def apply_manipulation(
    name: Manipulation,
    conversation: Conversation,
    rng: Rng,
    config: ManipulationConfig,
    lexicon: AntonymLexicon,
    donor_pool: Sequence[str] = (),
) -> ManipulationResult:
    """Dispatches to one semantic manipulation by name."""
    match name:
        case Manipulation.CONTRADICTION:
            return contradict(conversation, lexicon, rng, config)
        case Manipulation.COREFERENCE:
            return coref_inconsistency(conversation, rng, config)
        case Manipulation.IRRELEVANCY:
            return irrelevancy(conversation, rng, config, donor_pool)
        case Manipulation.ENGAGEMENT:
            return decrease_engagement(conversation, rng, config=config)
    raise ValueError(f"unknown manipulation {name!r}")


def draw_plan(rng: Rng, config: ManipulationConfig) -> tuple[int, list[Manipulation]]:
    """
    Draws how many manipulations to apply, `k` uniform in `[min_ops, max_ops]`, and a random
    order over every enabled manipulation. The pipeline walks that order and keeps the first
    `k` that apply, which samples `k` distinct manipulations while replacing any that find
    no target.
    """
    k = rng.randint(config.min_ops, config.max_ops)
    order = rng.sample(list(config.enabled), len(config.enabled))
    return k, order


def apply_pipeline(
    conversation: Conversation,
    config: ManipulationConfig,
    seed: int,
    lexicon: AntonymLexicon | None = None,
    donor_pool: Sequence[str] = (),
) -> tuple[Conversation, ManipulationRecord]:
    """
    Turns a coherent (or unlabeled) conversation into an incoherent one with 1-3 semantic
    manipulations.

    The rng is seeded per conversation from `seed` and the conversation id, so results do not
    depend on which other conversations are processed, or in which order or process.

    Args:
        conversation (Conversation): conversation to manipulate
        config (ManipulationConfig): enabled manipulations and their settings
        seed (int): global seed
        lexicon (AntonymLexicon | None): contradiction lexicon (the bundled one by default)
        donor_pool (Sequence[str]): extra irrelevancy donors, used with
            `config.cross_conversation`

    Returns:
        (tuple[Conversation, ManipulationRecord]): the manipulated conversation, labeled
            incoherent and carrying its record; or, when nothing applies, the input unchanged
            with an empty record

    Raises:
        ValueError: `conversation` is already labeled incoherent

    """
    lexicon = lexicon if lexicon is not None else bundled_lexicon()
    if conversation.label == Label.INCOHERENT:
        raise ValueError(f"conversation {conversation.id!r} is already labeled incoherent")
    rng_seed = conversation_seed(seed, conversation.id)
    rng = Rng(rng_seed)
    k, order = draw_plan(rng, config)

    current = conversation
    steps: list[ManipulationStep] = []
    applied = 0
    for name in order:
        if applied == k:
            break
        try:
            current, new_steps = apply_manipulation(
                name, current, rng, config, lexicon, donor_pool
            )
        except NotApplicableError as e:
            logger.debug(f"{conversation.id}: {name!s} not applicable ({e})")
            continue
        steps.extend(new_steps)
        applied += 1

    record = ManipulationRecord(
        conversation_id=conversation.id, seed=rng_seed, steps=tuple(steps)
    )
    if not steps:
        logger.warning(
            f"No manipulation applies to conversation {conversation.id!r}; left unchanged"
        )
        return conversation, record
    return current.model_copy(update={"label": Label.INCOHERENT, "record": record}), record


def apply_baseline(
    conversation: Conversation,
    corpus: Sequence[Conversation],
    mix: BaselineConfig | None,
    seed: int,
) -> tuple[Conversation, ManipulationRecord]:
    """
    Builds a text-level negative with one primitive drawn from `mix`; primitives whose
    precondition fails are replaced by another from the mix.

    Raises:
        NotApplicableError: no primitive of the mix applies

    """
    mix = mix or BaselineConfig()
    rng_seed = conversation_seed(seed ^ _BASELINE_STREAM, conversation.id)
    rng = Rng(rng_seed)
    for primitive in rng.sample(list(mix.mix), len(mix.mix)):
        try:
            result, step = plan_primitive(primitive, conversation, rng, corpus)
        except NotApplicableError:
            continue
        record = ManipulationRecord(
            conversation_id=conversation.id, seed=rng_seed, steps=(step,)
        )
        return result.model_copy(update={"label": Label.INCOHERENT, "record": record}), record
    raise NotApplicableError(f"no baseline primitive applies to {conversation.id!r}")


def replay(conversation: Conversation, record: ManipulationRecord) -> Conversation:
    """
    Re-applies the steps of `record` to the original `conversation`. The result equals the
    conversation the record was produced with, label and record included.
    """
    current = conversation
    for step in record.steps:
        current = apply_step(current, step)
    if not record.steps:
        return current
    return current.model_copy(update={"label": Label.INCOHERENT, "record": record})

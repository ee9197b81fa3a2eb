"""
Text-level negatives used by earlier coherence metrics: reordering turns and splicing in
utterances from other conversations. AMRs are never edited, only whole utterances move.

Every primitive records a `Permutation` or `UtteranceSplice` step that carries the full
reordering (or the donor utterance itself), so a replay needs neither the rng nor the corpus.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from typing import Literal

from incoherify.config import BaselinePrimitive
from incoherify.dialogue.model import (
    Conversation,
    ManipulationStep,
    Permutation,
    UtteranceSplice,
)
from incoherify.errors import NotApplicableError
from incoherify.manipulate.rng import Rng
from incoherify.manipulate.steps import make_step

__all__ = [
    "inject_random_utterance",
    "plan_primitive",
    "shuffle_speaker",
    "shuffle_turns",
    "swap_halves",
]

logger = logging.getLogger(__name__)

_Planned = tuple[Conversation, ManipulationStep]


def _non_identity(rng: Rng, n: int) -> list[int]:
    while True:
        order = rng.permutation(n)
        if order != list(range(n)):
            return order


def _permuted(
    conversation: Conversation, name: BaselinePrimitive, order: list[int]
) -> _Planned:
    return make_step(conversation, name, 0, Permutation(order=tuple(order)))


def _plan_shuffle_turns(conversation: Conversation, rng: Rng) -> _Planned:
    n = len(conversation.utterances)
    if n < 2:
        raise NotApplicableError("shuffling turns needs at least two utterances")
    return _permuted(conversation, BaselinePrimitive.SHUFFLE_TURNS, _non_identity(rng, n))


def _plan_shuffle_speaker(conversation: Conversation, rng: Rng) -> _Planned:
    positions: dict[str, list[int]] = {}
    for i, speaker in enumerate(conversation.speakers):
        positions.setdefault(speaker, []).append(i)
    speakers = [s for s, where in positions.items() if len(where) >= 2]
    if not speakers:
        raise NotApplicableError("no speaker has two or more utterances")
    where = positions[rng.choice(speakers)]
    local = _non_identity(rng, len(where))
    order = list(range(len(conversation.utterances)))
    for slot, pick in zip(where, local, strict=True):
        order[slot] = where[pick]
    return _permuted(conversation, BaselinePrimitive.SHUFFLE_SPEAKER, order)


def _plan_swap_halves(conversation: Conversation) -> _Planned:
    n = len(conversation.utterances)
    if n < 2:
        raise NotApplicableError("swapping halves needs at least two utterances")
    half = math.ceil(n / 2)
    order = list(range(half, n)) + list(range(half))
    return _permuted(conversation, BaselinePrimitive.SWAP_HALVES, order)


def _plan_inject(
    conversation: Conversation,
    rng: Rng,
    corpus: Sequence[Conversation],
    mode: Literal["insert", "replace"],
) -> _Planned:
    donors = [c for c in corpus if c.id != conversation.id]
    if not donors:
        raise NotApplicableError("no other conversation to draw an utterance from")
    donor = rng.choice(donors)
    utterance = rng.choice(donor.utterances)
    n = len(conversation.utterances)
    position = rng.randint(0, n) if mode == "insert" else rng.randbelow(n)
    name = (
        BaselinePrimitive.INSERT_RANDOM_UTTERANCE
        if mode == "insert"
        else BaselinePrimitive.REPLACE_RANDOM_UTTERANCE
    )
    params = UtteranceSplice(mode=mode, position=position, donor_id=donor.id, utterance=utterance)
    return make_step(conversation, name, position, params)


def plan_primitive(
    primitive: BaselinePrimitive,
    conversation: Conversation,
    rng: Rng,
    corpus: Sequence[Conversation] = (),
) -> _Planned:
    """
    Runs one baseline primitive and returns the result with its recorded step.

    Raises:
        NotApplicableError: the primitive's precondition fails

    """
    match primitive:
        case BaselinePrimitive.SHUFFLE_TURNS:
            return _plan_shuffle_turns(conversation, rng)
        case BaselinePrimitive.SHUFFLE_SPEAKER:
            return _plan_shuffle_speaker(conversation, rng)
        case BaselinePrimitive.SWAP_HALVES:
            return _plan_swap_halves(conversation)
        case BaselinePrimitive.INSERT_RANDOM_UTTERANCE:
            return _plan_inject(conversation, rng, corpus, "insert")
        case BaselinePrimitive.REPLACE_RANDOM_UTTERANCE:
            return _plan_inject(conversation, rng, corpus, "replace")
    raise ValueError(f"unknown baseline primitive {primitive!r}")


def shuffle_turns(conversation: Conversation, rng: Rng) -> Conversation:
    """Uniformly random non-identity reordering of all utterances (speakers move with them)."""
    return _plan_shuffle_turns(conversation, rng)[0]


def shuffle_speaker(conversation: Conversation, rng: Rng) -> Conversation:
    """
    Permutes one speaker's utterances among that speaker's own positions; everyone else's
    utterances stay where they are.
    """
    return _plan_shuffle_speaker(conversation, rng)[0]


def swap_halves(conversation: Conversation) -> Conversation:
    """Second half (from index `ceil(n/2)`) followed by the first half."""
    return _plan_swap_halves(conversation)[0]


def inject_random_utterance(
    conversation: Conversation,
    corpus: Sequence[Conversation],
    rng: Rng,
    mode: Literal["insert", "replace"] = "replace",
) -> Conversation:
    """
    Splices in a random utterance of a random other conversation from `corpus`, either at a
    uniform insert position (length grows by one) or over a uniform position.
    """
    return _plan_inject(conversation, rng, corpus, mode)[0]

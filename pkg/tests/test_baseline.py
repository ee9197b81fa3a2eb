"""Tests for the text-level baseline negatives."""

import pytest

from incoherify.config import BaselinePrimitive
from incoherify.dialogue import Conversation, Utterance
from incoherify.errors import NotApplicableError
from incoherify.examples import worked_example
from incoherify.manipulate import (
    Rng,
    inject_random_utterance,
    plan_primitive,
    shuffle_speaker,
    shuffle_turns,
    swap_halves,
)
from incoherify.manipulate.steps import apply_step


def _numbered(n: int, conversation_id: str = "numbered") -> Conversation:
    return Conversation(
        id=conversation_id,
        utterances=tuple(
            Utterance(speaker="AB"[i % 2], text=f"turn {i}", amr=f"(s / say-01 :quant {i})")
            for i in range(n)
        ),
    )


def _texts(conversation: Conversation) -> list[str | None]:
    return [u.text for u in conversation.utterances]


class TestShuffleTurns:
    def test_is_a_non_identity_permutation(self):
        original = _numbered(4)
        for seed in range(30):
            result = shuffle_turns(original, Rng(seed))
            assert sorted(_texts(result)) == sorted(_texts(original))
            assert _texts(result) != _texts(original)

    def test_two_utterances_always_swap(self):
        assert _texts(shuffle_turns(_numbered(2), Rng(0))) == ["turn 1", "turn 0"]

    def test_needs_two_utterances(self):
        with pytest.raises(NotApplicableError):
            shuffle_turns(_numbered(1), Rng(0))


class TestShuffleSpeaker:
    def test_moves_one_speakers_turns_among_their_own_slots(self):
        original = worked_example()
        for seed in range(30):
            result = shuffle_speaker(original, Rng(seed))
            assert result.speakers == original.speakers
            moved = [
                i
                for i, (a, b) in enumerate(zip(result.utterances, original.utterances))
                if a != b
            ]
            assert moved in ([0, 2], [1, 3])

    def test_needs_a_speaker_with_two_turns(self):
        with pytest.raises(NotApplicableError):
            shuffle_speaker(_numbered(2), Rng(0))


class TestSwapHalves:
    def test_even(self):
        assert _texts(swap_halves(_numbered(4))) == ["turn 2", "turn 3", "turn 0", "turn 1"]

    def test_odd_puts_the_shorter_half_first(self):
        assert _texts(swap_halves(_numbered(5))) == [
            "turn 3",
            "turn 4",
            "turn 0",
            "turn 1",
            "turn 2",
        ]


class TestInjectRandomUtterance:
    def test_replace_keeps_the_length(self):
        original = _numbered(3)
        donor = worked_example()
        result = inject_random_utterance(original, [original, donor], Rng(1), mode="replace")
        assert len(result.utterances) == 3
        (spliced,) = [u for u in result.utterances if u not in original.utterances]
        assert spliced in donor.utterances

    def test_insert_adds_one(self):
        original = _numbered(3)
        donor = worked_example()
        result = inject_random_utterance(original, [donor], Rng(2), mode="insert")
        assert len(result.utterances) == 4
        assert sum(u in donor.utterances for u in result.utterances) == 1

    def test_needs_another_conversation(self):
        original = _numbered(3)
        with pytest.raises(NotApplicableError):
            inject_random_utterance(original, [original], Rng(0))


class TestPlanPrimitive:
    @pytest.mark.parametrize("primitive", list(BaselinePrimitive))
    def test_recorded_step_replays(self, primitive: BaselinePrimitive):
        original = _numbered(5)
        corpus = [original, worked_example()]
        result, step = plan_primitive(primitive, original, Rng(3), corpus)
        assert step.name == primitive
        assert apply_step(original, step) == result

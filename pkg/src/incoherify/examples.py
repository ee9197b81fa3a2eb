"""
Example data for exercising the pipeline: a worked example conversation about a children's TV
show (four turns, one of them a three-sentence utterance with a question in it) and a seeded
generator of small synthetic coherent conversations.
"""

from __future__ import annotations

import logging
from pathlib import Path

from incoherify.dialogue.corpus import save_corpus
from incoherify.dialogue.model import Conversation, Label, Utterance
from incoherify.manipulate.rng import Rng

__all__ = [
    "WORKED_EXAMPLE_ID",
    "make_example_corpus",
    "make_example_data",
    "synthetic_conversation",
    "worked_example",
]

logger = logging.getLogger(__name__)

WORKED_EXAMPLE_ID = "sesame-street"

# the published graph for turn 2 spells the name "Ggrouch"; the text reads "Grouch"
_WORKED_EXAMPLE: tuple[tuple[str, str, str], ...] = (
    (
        "A",
        "Have you watched Sesame Street?",
        """
        (w / watch-01
              :ARG0 (y / you)
              :ARG1 (b / broadcast-program
                    :name (n / name
                          :op1 "Sesame"
                          :op2 "Street"))
              :polarity (a / amr-unknown))
        """,
    ),
    (
        "B",
        "I used to when my kids were young. I liked Oscar the Grouch. He seemed realistic.",
        """
        (m / multi-sentence
              :snt1 (u / use-02
                    :ARG0 (ii / i)
                    :time (y / young
                          :domain (p / person
                                :ARG0-of (h / have-rel-role-91
                                      :ARG1 ii
                                      :ARG2 (k / kid)))))
              :snt2 (l / like-01
                    :ARG0 (ii2 / i)
                    :ARG1 (p2 / person
                          :name (n / name
                                :op1 "Oscar"
                                :op2 "the"
                                :op3 "Grouch")))
              :snt3 (s / seem-01
                    :ARG1 (r / realistic-03
                          :ARG1 (h2 / he))))
        """,
    ),
    (
        "A",
        "He was one of my favorite character as well, why is he green though? "
        "I've always wondered that.",
        """
        (m / multi-sentence
              :snt1 (ii / include-91
                    :ARG1 (h / he)
                    :ARG2 (c / character
                          :ARG1-of (f / favor-01
                                :ARG0 (ii2 / i)))
                    :mod (a / as-well))
              :snt2 (h2 / have-concession-91
                    :ARG1 (g / green-02
                          :ARG1 (h3 / he)
                          :ARG1-of (c2 / cause-01
                                :ARG0 (a2 / amr-unknown))))
              :snt3 (w / wonder-01
                    :ARG0 (ii3 / i)
                    :ARG1 (t / that)
                    :time (a3 / always)))
        """,
    ),
    (
        "B",
        "He was once orange though.",
        """
        (h / have-concession-91
              :ARG1 (o / orange
                    :domain (h2 / he)
                    :time (o2 / once)))
        """,
    ),
)


def worked_example() -> Conversation:
    """The four-turn example conversation, labeled coherent."""
    return Conversation(
        id=WORKED_EXAMPLE_ID,
        label=Label.COHERENT,
        utterances=tuple(
            Utterance(speaker=speaker, text=text, amr=penman)
            for speaker, text, penman in _WORKED_EXAMPLE
        ),
    )


# (verb, object) vocabulary; every verb has an antonym in the bundled lexicon
_VERBS = ("like", "love", "enjoy", "remember", "start", "win")
_OBJECTS = ("music", "book", "game", "movie", "garden", "dog", "pizza", "city")
_PRONOUNS = ("he", "she", "they", "we")
_ADJECTIVES = ("good", "happy", "interesting")


def _question(rng: Rng) -> tuple[str, str]:
    verb, obj = rng.choice(_VERBS), rng.choice(_OBJECTS)
    return (
        f"Do you {verb} the {obj}?",
        f"(v / {verb}-01 :ARG0 (y / you) :ARG1 (o / {obj}) :polarity (a / amr-unknown))",
    )


def _statement(rng: Rng) -> tuple[str, str]:
    verb, obj = rng.choice(_VERBS), rng.choice(_OBJECTS)
    return f"I {verb} the {obj}.", f"(v / {verb}-01 :ARG0 (ii / i) :ARG1 (o / {obj}))"


def _habit(rng: Rng) -> tuple[str, str]:
    verb, obj, pron = rng.choice(_VERBS), rng.choice(_OBJECTS), rng.choice(_PRONOUNS)
    return (
        f"{pron.capitalize()} {verb}s the {obj} every day.",
        f"(v / {verb}-01 :ARG0 (p / {pron}) :ARG1 (o / {obj}) "
        f":frequency (d / day :mod (e / every)))",
    )


def _two_sentences(rng: Rng) -> tuple[str, str]:
    verb, obj = rng.choice(_VERBS), rng.choice(_OBJECTS)
    pron, adj = rng.choice(_PRONOUNS), rng.choice(_ADJECTIVES)
    return (
        f"I {verb} the {obj}. {pron.capitalize()} seems {adj}.",
        f"(m / multi-sentence :snt1 (v / {verb}-01 :ARG0 (ii / i) :ARG1 (o / {obj})) "
        f":snt2 (s / seem-01 :ARG1 (g / {adj} :domain (p / {pron}))))",
    )


_TEMPLATES = (_question, _statement, _habit, _two_sentences)


def synthetic_conversation(conversation_id: str, rng: Rng) -> Conversation:
    """
    A coherent-looking 3-5 turn conversation between speakers `A` and `B`, opened by a
    question.
    """
    n = rng.randint(3, 5)
    turns = [_question(rng)] + [rng.choice(_TEMPLATES)(rng) for _ in range(n - 1)]
    return Conversation(
        id=conversation_id,
        label=Label.COHERENT,
        utterances=tuple(
            Utterance(speaker="AB"[i % 2], text=text, amr=penman)
            for i, (text, penman) in enumerate(turns)
        ),
    )


def make_example_corpus(n: int = 20, seed: int = 0, worked: bool = True) -> list[Conversation]:
    """
    `n` synthetic conversations (ids `synthetic-0000`, ...), preceded by the worked example
    when `worked` is set.
    """
    rng = Rng(seed)
    corpus = [worked_example()] if worked else []
    corpus.extend(synthetic_conversation(f"synthetic-{i:04d}", rng) for i in range(n))
    return corpus


def make_example_data(out: Path, n: int = 20, seed: int = 0) -> int:
    """
    Writes `make_example_corpus(n, seed)` to `out` as a corpus file.

    Returns:
        (int): conversations written

    """
    count = save_corpus(make_example_corpus(n, seed), Path(out))
    logger.info(f"Wrote {count} example conversation(s) to '{out}'")
    return count

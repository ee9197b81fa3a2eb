"""
Corpus statistics in the usual dataset-summary layout: size, mean conversation length (in
utterances) and mean utterance length (whitespace tokens of the surface text, or AMR concept
count for utterances without text), overall and per label.
"""

from __future__ import annotations

from collections.abc import Iterable

import polars as pl

from incoherify.dialogue.model import Conversation

__all__ = ["corpus_statistics"]

_SCHEMA = {
    "split": pl.Utf8,
    "size": pl.Int64,
    "mean_conversation_length": pl.Float64,
    "mean_utterance_length": pl.Float64,
}


def _utterance_rows(conversations: Iterable[Conversation]) -> pl.DataFrame:
    rows = [
        {
            "conversation_id": conversation.id,
            "label": conversation.label.value if conversation.label else "unlabeled",
            "length": len(u.text.split()) if u.text else len(u.amr.nodes),
        }
        for conversation in conversations
        for u in conversation.utterances
    ]
    return pl.DataFrame(
        rows,
        schema={"conversation_id": pl.Utf8, "label": pl.Utf8, "length": pl.Int64},
    )


def _summarize(utterances: pl.DataFrame) -> pl.DataFrame:
    per_conversation = utterances.group_by("conversation_id").agg(
        pl.len().alias("turns")
    )
    return pl.DataFrame(
        {
            "size": [per_conversation.height],
            "mean_conversation_length": [per_conversation["turns"].mean()],
            "mean_utterance_length": [utterances["length"].mean()],
        }
    )


def corpus_statistics(conversations: Iterable[Conversation]) -> pl.DataFrame:
    """
    Summarizes a corpus.

    Args:
        conversations (Iterable[Conversation]): corpus to summarize

    Returns:
        (pl.DataFrame): columns `split`, `size`, `mean_conversation_length`,
            `mean_utterance_length`; first row `all`, then one row per label present (sorted)

    """
    utterances = _utterance_rows(conversations)
    if utterances.height == 0:
        return pl.DataFrame([{"split": "all", "size": 0}], schema=_SCHEMA)

    frames = [_summarize(utterances).with_columns(pl.lit("all").alias("split"))]
    for label in sorted(utterances["label"].unique().to_list()):
        subset = utterances.filter(pl.col("label") == label)
        frames.append(_summarize(subset).with_columns(pl.lit(label).alias("split")))
    return pl.concat(frames).select(list(_SCHEMA)).cast(_SCHEMA)

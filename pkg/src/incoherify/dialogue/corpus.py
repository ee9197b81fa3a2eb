"""
The line-delimited corpus format: one JSON `Conversation` per line, UTF-8, with the keys `id`,
`label`, `utterances` (`speaker`, `text`, `amr`) and `record`. AMRs are single-line PENMAN.

Reading streams, so corpora larger than memory can be linted and manipulated line by line.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import IO, Any

import pydantic_core
from pydantic import ValidationError

from incoherify.dialogue.model import Conversation
from incoherify.errors import CorpusError

__all__ = [
    "dump_line",
    "iter_corpus",
    "lint_corpus",
    "load_corpus",
    "read_corpus",
    "save_corpus",
    "write_corpus",
]

logger = logging.getLogger(__name__)


def _translate(error: ValidationError, *, line: int, raw: Any) -> CorpusError:
    conversation_id = raw.get("id") if isinstance(raw, dict) else None
    first = error.errors()[0]
    loc = first["loc"]
    utterance_index = None
    if len(loc) >= 2 and loc[0] == "utterances" and isinstance(loc[1], int):
        utterance_index = loc[1]
    field = ".".join(str(part) for part in loc) or "record"
    message = first["msg"].removeprefix("Value error, ")
    return CorpusError(
        f"{field}: {message}",
        line=line,
        conversation_id=conversation_id if isinstance(conversation_id, str) else None,
        utterance_index=utterance_index,
    )


def _decode(raw_line: bytes | str, line: int) -> Conversation:
    try:
        raw = pydantic_core.from_json(raw_line)
    except ValueError as e:
        raise CorpusError(f"malformed line: {e}", line=line) from e
    try:
        return Conversation.model_validate(raw)
    except ValidationError as e:
        raise _translate(e, line=line, raw=raw) from e


def iter_corpus(stream: IO[bytes]) -> Iterator[tuple[int, Conversation]]:
    """
    Streams `(line number, conversation)` pairs from a corpus. Blank lines are skipped.

    Args:
        stream (IO[bytes]): binary stream of corpus lines

    Raises:
        CorpusError: the first malformed line, invalid AMR or repeated conversation id, with
            the 1-based line number attached

    """
    seen: set[str] = set()
    for line_number, raw_line in enumerate(stream, start=1):
        if not raw_line.strip():
            continue
        conversation = _decode(raw_line, line_number)
        if conversation.id in seen:
            raise CorpusError(
                "duplicate conversation id",
                line=line_number,
                conversation_id=conversation.id,
            )
        seen.add(conversation.id)
        yield line_number, conversation


def read_corpus(stream: IO[bytes]) -> list[Conversation]:
    """Reads a whole corpus; see `iter_corpus` for errors."""
    return [conversation for _, conversation in iter_corpus(stream)]


def lint_corpus(stream: IO[bytes]) -> list[CorpusError]:
    """
    Checks every line of a corpus and collects all problems instead of stopping at the first.

    Returns:
        (list[CorpusError]): one error per bad line (empty for a clean corpus)

    """
    problems: list[CorpusError] = []
    seen: set[str] = set()
    for line_number, raw_line in enumerate(stream, start=1):
        if not raw_line.strip():
            continue
        try:
            conversation = _decode(raw_line, line_number)
        except CorpusError as e:
            problems.append(e)
            continue
        if conversation.id in seen:
            problems.append(
                CorpusError(
                    "duplicate conversation id",
                    line=line_number,
                    conversation_id=conversation.id,
                )
            )
        seen.add(conversation.id)
    return problems


def dump_line(conversation: Conversation) -> bytes:
    """One corpus line (newline included). `None`-valued optional keys are omitted."""
    return conversation.model_dump_json(exclude_none=True).encode("utf-8") + b"\n"


def write_corpus(conversations: Iterable[Conversation], stream: IO[bytes]) -> int:
    """
    Writes conversations one per line.

    Returns:
        (int): number of conversations written

    """
    count = 0
    for conversation in conversations:
        stream.write(dump_line(conversation))
        count += 1
    return count


def load_corpus(path: Path) -> list[Conversation]:
    with Path(path).open("rb") as f:
        return read_corpus(f)


def save_corpus(conversations: Iterable[Conversation], path: Path) -> int:
    """
    Writes a corpus file. `conversations` may be lazy: lines go to a sibling `.part` file that
    replaces `path` only once every conversation is written, so an error part way through
    leaves no truncated corpus behind (and an existing `path` untouched).
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    partial = path.with_name(f".{path.name}.part")
    try:
        with partial.open("wb") as f:
            count = write_corpus(conversations, f)
        partial.replace(path)
    except BaseException:
        partial.unlink(missing_ok=True)
        raise
    logger.info(f"Wrote {count} conversation(s) to '{path}'")
    return count

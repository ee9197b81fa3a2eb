"""
Contradiction lexicon built from ConceptNet's negative relations (`Antonym`, `NotDesires`,
`NotCapableOf`, `NotHasProperty`).

Two input formats are supported: the compact TSV the package ships (`relation`, `lemma_a`,
`lemma_b` per row) and raw ConceptNet assertion dumps.
"""

from __future__ import annotations

import csv
import logging
import re
from collections import defaultdict
from collections.abc import Iterator
from enum import StrEnum
from functools import cache
from importlib.resources import files
from typing import IO

from pydantic import BaseModel, ConfigDict

from incoherify.errors import LexiconFormatError

__all__ = [
    "AntonymLexicon",
    "Relation",
    "antonyms_of",
    "bundled_lexicon",
    "load_conceptnet_assertions",
    "load_lexicon",
    "normalize_lemma",
    "split_sense",
]

logger = logging.getLogger(__name__)

_SENSE_RE = re.compile(r"^(?P<lemma>.+?)(?P<sense>-\d{2})$")


class Relation(StrEnum):
    ANTONYM = "Antonym"
    NOT_DESIRES = "NotDesires"
    NOT_CAPABLE_OF = "NotCapableOf"
    NOT_HAS_PROPERTY = "NotHasProperty"


def split_sense(concept: str) -> tuple[str, str]:
    """`("like", "-01")` for `like-01`; `("orange", "")` for a concept without a sense suffix."""
    m = _SENSE_RE.match(concept)
    if m is None:
        return concept, ""
    return m.group("lemma"), m.group("sense")


def normalize_lemma(lemma: str) -> str:
    """
    Lowercased, trimmed lexicon lemma. Lexicon lemmas carry no senses, so a trailing `-NN`
    (as in `catch-22`) is kept.
    """
    return lemma.strip().lower()


class AntonymLexicon(BaseModel):
    """
    Lemma -> `(lemma, relation)` contradiction candidates. `Antonym` pairs are indexed in both
    directions; the other relations only from `lemma_a` to `lemma_b`.
    """

    entries: dict[str, frozenset[tuple[str, Relation]]] = {}

    model_config = ConfigDict(frozen=True)

    @classmethod
    def from_triples(cls, triples: list[tuple[Relation, str, str]]) -> AntonymLexicon:
        index: dict[str, set[tuple[str, Relation]]] = defaultdict(set)
        for relation, a, b in triples:
            a, b = normalize_lemma(a), normalize_lemma(b)
            if not a or not b or a == b:
                continue
            index[a].add((b, relation))
            if relation is Relation.ANTONYM:
                index[b].add((a, relation))
        return cls(entries={k: frozenset(v) for k, v in index.items()})

    def __len__(self) -> int:
        return len(self.entries)

    def _lookup(self, concept: str) -> tuple[frozenset[tuple[str, Relation]], str]:
        """Entries for an AMR concept (tried whole, then without its sense) and that sense."""
        concept = concept.strip().lower()
        if concept in self.entries:
            return self.entries[concept], ""
        lemma, sense = split_sense(concept)
        return self.entries.get(lemma, frozenset()), sense

    def covers(self, concept: str) -> bool:
        return bool(self._lookup(concept)[0])

    def antonyms_of(self, concept: str) -> set[str]:
        """
        Contradiction candidates for `concept`, carrying over its sense suffix: with the
        `(Antonym, like, hate)` row, `like-01` yields `{"hate-01"}`.
        """
        candidates, sense = self._lookup(concept)
        return {lemma + sense for lemma, _ in candidates}


def antonyms_of(lexicon: AntonymLexicon, concept: str) -> set[str]:
    """Functional form of `AntonymLexicon.antonyms_of`."""
    return lexicon.antonyms_of(concept)


def _text_lines(stream: IO[bytes] | IO[str]) -> Iterator[str]:
    for line in stream:
        yield line.decode("utf-8") if isinstance(line, bytes) else line


def load_lexicon(stream: IO[bytes] | IO[str]) -> AntonymLexicon:
    """
    Reads `relation<TAB>lemma_a<TAB>lemma_b` rows. Blank and `#` lines are ignored; rows with a
    relation outside `Relation` are dropped.

    Args:
        stream (IO[bytes] | IO[str]): TSV stream

    Returns:
        (AntonymLexicon): the lexicon (empty for an empty stream)

    Raises:
        LexiconFormatError: a row without exactly three columns

    """
    triples: list[tuple[Relation, str, str]] = []
    dropped = 0
    for line_number, line in enumerate(_text_lines(stream), start=1):
        row = line.rstrip("\r\n")
        if not row.strip() or row.lstrip().startswith("#"):
            continue
        columns = row.split("\t")
        if len(columns) != 3:
            raise LexiconFormatError(
                f"expected 3 tab-separated columns, found {len(columns)}", line=line_number
            )
        name, a, b = (c.strip() for c in columns)
        try:
            relation = Relation(name)
        except ValueError:
            dropped += 1
            continue
        triples.append((relation, a, b))
    if dropped:
        logger.debug(f"Dropped {dropped} lexicon row(s) with unsupported relations")
    return AntonymLexicon.from_triples(triples)


def _conceptnet_lemma(uri: str) -> str | None:
    # /c/en/lemma[/pos[/...]]
    parts = uri.split("/")
    if len(parts) < 4 or parts[1] != "c" or parts[2] != "en":
        return None
    return parts[3].replace("_", "-")


def load_conceptnet_assertions(stream: IO[bytes] | IO[str]) -> AntonymLexicon:
    """
    Builds a lexicon from a raw ConceptNet assertions dump (tab-separated: assertion URI,
    `/r/Relation`, start `/c/...` URI, end `/c/...` URI, JSON info). Only English-to-English
    rows of the four supported relations are kept; part-of-speech suffixes are stripped and
    multiword `_` lemmas become `-`-joined.
    """
    triples: list[tuple[Relation, str, str]] = []
    reader = csv.reader(_text_lines(stream), delimiter="\t", quoting=csv.QUOTE_NONE)
    for row in reader:
        if len(row) < 4:
            continue
        name = row[1].removeprefix("/r/")
        try:
            relation = Relation(name)
        except ValueError:
            continue
        a, b = _conceptnet_lemma(row[2]), _conceptnet_lemma(row[3])
        if a is None or b is None:
            continue
        triples.append((relation, a, b))
    logger.info(f"Kept {len(triples)} ConceptNet assertion(s)")
    return AntonymLexicon.from_triples(triples)


@cache
def bundled_lexicon() -> AntonymLexicon:
    """The curated lexicon shipped with the package."""
    resource = files("incoherify.knowledge").joinpath("data/lexicon.tsv")
    with resource.open("rb") as f:
        return load_lexicon(f)

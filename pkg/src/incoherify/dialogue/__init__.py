"""
Conversations of AMR-annotated utterances and the line-delimited corpus format.
"""

from incoherify.dialogue import corpus, model, stats
from incoherify.dialogue.corpus import (
    dump_line,
    iter_corpus,
    lint_corpus,
    load_corpus,
    read_corpus,
    save_corpus,
    write_corpus,
)
from incoherify.dialogue.model import (
    ConceptReplacement,
    ContradictionParams,
    Conversation,
    Label,
    ManipulationRecord,
    ManipulationStep,
    Negation,
    Permutation,
    StepParameters,
    SubtreeRemoval,
    Utterance,
    UtteranceDrop,
    UtteranceSplice,
    sentence_units,
)
from incoherify.dialogue.stats import corpus_statistics

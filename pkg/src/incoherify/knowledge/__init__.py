"""
ConceptNet-derived contradiction lexicon.
"""

from incoherify.knowledge import lexicon
from incoherify.knowledge.lexicon import (
    AntonymLexicon,
    Relation,
    antonyms_of,
    bundled_lexicon,
    load_conceptnet_assertions,
    load_lexicon,
    normalize_lemma,
    split_sense,
)

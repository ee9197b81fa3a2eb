"""
The four AMR-level incoherence injections: contradiction, coreference inconsistency,
irrelevancy and decreased engagement.

Each public function takes a conversation and an `Rng`, plans its edits (all randomness is
spent here), applies them through `incoherify.manipulate.steps.make_step`, and returns the
edited conversation with the steps it recorded. A function that finds nothing to edit raises
`NotApplicableError`; callers are expected to try another manipulation.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

from incoherify.amr import (
    MULTI_SENTENCE,
    UNKNOWN,
    AmrGraph,
    IncomingRole,
    IsPronoun,
    find_nodes,
    is_predicate_concept,
    node_depths,
    subtree_variables,
    traverse,
)
from incoherify.config import EngagementStrategy, Manipulation, ManipulationConfig
from incoherify.dialogue.model import (
    ConceptReplacement,
    ContradictionParams,
    Conversation,
    ManipulationStep,
    Negation,
    SubtreeRemoval,
    UtteranceDrop,
    sentence_units,
)
from incoherify.errors import NotApplicableError
from incoherify.knowledge import AntonymLexicon
from incoherify.manipulate.rng import Rng
from incoherify.manipulate.steps import make_step

__all__ = [
    "ManipulationResult",
    "contradict",
    "coref_inconsistency",
    "decrease_engagement",
    "harvest_concepts",
    "irrelevancy",
]

logger = logging.getLogger(__name__)

ManipulationResult = tuple[Conversation, list[ManipulationStep]]

_ARG = IncomingRole(":ARG")
_OP = IncomingRole(":op")


def _is_argument(amr: AmrGraph, var: str) -> bool:
    return _ARG(amr, var) or _OP(amr, var)


def _is_noun(concept: str, pronouns: frozenset[str]) -> bool:
    return not (
        is_predicate_concept(concept)
        or concept in pronouns
        or concept in (UNKNOWN, MULTI_SENTENCE)
    )


def harvest_concepts(
    conversations: Sequence[Conversation], pronouns: frozenset[str] = frozenset()
) -> list[str]:
    """
    Concepts usable as irrelevancy replacements: predicate concepts plus the `:ARG`/`:op` fillers
    that are not in `pronouns`, deduplicated in first-seen order.
    """
    seen: dict[str, None] = {}
    for conversation in conversations:
        for u in conversation.utterances:
            for var, _ in traverse(u.amr):
                concept = u.amr.nodes[var]
                if is_predicate_concept(concept) or (
                    _is_argument(u.amr, var) and _is_noun(concept, pronouns)
                ):
                    seen.setdefault(concept)
    return list(seen)


# --------------------------------------------------------------------------------------------
# contradiction


def _contradictable(amr: AmrGraph, var: str, lexicon: AntonymLexicon) -> bool:
    concept = amr.nodes[var]
    return concept != MULTI_SENTENCE and (
        is_predicate_concept(concept) or lexicon.covers(concept)
    )


def contradict(
    conversation: Conversation,
    lexicon: AntonymLexicon,
    rng: Rng,
    config: ManipulationConfig | None = None,
) -> ManipulationResult:
    """
    Makes a speaker contradict themselves: a run of sentence units from one of their
    utterances is copied into a strictly later utterance of theirs, with the head concept of
    at least one copied unit negated (an antonym when `lexicon` has one, else a polarity
    toggle). Units not chosen for negation travel verbatim.

    Raises:
        NotApplicableError: no speaker has a later utterance after one holding a predicate or
            lexicon-covered sentence unit

    """
    config = config or ManipulationConfig()
    utterances = conversation.utterances
    pairs = [
        (i, j)
        for i in range(len(utterances))
        for j in range(i + 1, len(utterances))
        if utterances[i].speaker == utterances[j].speaker
        and any(
            _contradictable(utterances[i].amr, v, lexicon)
            for _, v in sentence_units(utterances[i])
        )
    ]
    if not pairs:
        raise NotApplicableError("no same-speaker utterance pair with a contradictable unit")

    source, target = rng.choice(pairs)
    amr = utterances[source].amr
    units = sentence_units(amr)
    eligible = [pos for pos, (_, v) in enumerate(units) if _contradictable(amr, v, lexicon)]

    length = rng.randint(1, min(config.max_units, len(units)))
    starts = [
        s
        for s in range(len(units) - length + 1)
        if any(s <= pos < s + length for pos in eligible)
    ]
    start = rng.choice(starts)
    span = units[start : start + length]
    in_span = [pos for pos in eligible if start <= pos < start + length]
    negated = sorted(rng.sample(in_span, rng.randint(1, len(in_span))))

    negations: dict[int, Negation] = {}
    for pos in negated:
        k, var = units[pos]
        antonyms = sorted(lexicon.antonyms_of(amr.nodes[var]) - {amr.nodes[var]})
        if antonyms:
            negations[k] = Negation(mode="antonym", concept=rng.choice(antonyms))
        else:
            negations[k] = Negation(mode="polarity")

    params = ContradictionParams(
        source_index=source,
        units=tuple(k for k, _ in span),
        negations=negations,
    )
    logger.debug(
        f"{conversation.id}: contradicting units {params.units} of utterance {source} "
        f"into utterance {target}"
    )
    result, step = make_step(conversation, Manipulation.CONTRADICTION, target, params)
    return result, [step]


# --------------------------------------------------------------------------------------------
# coreference inconsistency


def coref_inconsistency(
    conversation: Conversation,
    rng: Rng,
    config: ManipulationConfig | None = None,
) -> ManipulationResult:
    """
    Swaps 1-3 pronouns that fill `:ARG` roles for a different pronoun or for a noun mentioned
    elsewhere in the conversation. Only concepts change; node and edge counts are preserved.

    Raises:
        NotApplicableError: no pronoun fills an `:ARG` role

    """
    config = config or ManipulationConfig()
    pronouns = config.pronoun_set
    is_pronoun = IsPronoun(pronouns)
    candidates = [
        (i, var)
        for i, u in enumerate(conversation.utterances)
        for var in find_nodes(u.amr, lambda g, v: is_pronoun(g, v) and _ARG(g, v))
    ]
    if not candidates:
        raise NotApplicableError("no pronoun in an :ARG role")

    nouns = [
        c for c in harvest_concepts([conversation], pronouns) if not is_predicate_concept(c)
    ]
    lo, hi = config.coreference_count.bounded(len(candidates))
    chosen = sorted(rng.sample(candidates, rng.randint(lo, hi)), key=candidates.index)

    replacements: dict[int, dict[str, str]] = {}
    for i, var in chosen:
        current = conversation.utterances[i].amr.nodes[var]
        other_pronouns = [p for p in config.pronouns if p != current]
        other_nouns = [n for n in nouns if n != current]
        if other_nouns and rng.randbelow(2):
            replacement = rng.choice(other_nouns)
        else:
            replacement = rng.choice(other_pronouns)
        replacements.setdefault(i, {})[var] = replacement

    steps = []
    for i, mapping in replacements.items():
        conversation, step = make_step(
            conversation, Manipulation.COREFERENCE, i, ConceptReplacement(replacements=mapping)
        )
        steps.append(step)
    return conversation, steps


# --------------------------------------------------------------------------------------------
# irrelevancy


def irrelevancy(
    conversation: Conversation,
    rng: Rng,
    config: ManipulationConfig | None = None,
    donor_pool: Sequence[str] = (),
) -> ManipulationResult:
    """
    Replaces 1-3 items (predicate concepts, or `:ARG`/`:op` fillers) with same-category
    concepts taken from other utterances of the conversation, or also from `donor_pool` when
    `config.cross_conversation` is set.

    Raises:
        NotApplicableError: fewer than two utterances, or no item has a same-category donor

    """
    config = config or ManipulationConfig()
    utterances = conversation.utterances
    if len(utterances) < 2:
        raise NotApplicableError("irrelevancy needs at least two utterances")

    per_utterance: list[list[tuple[str, bool]]] = []
    for u in utterances:
        items = []
        for var, _ in traverse(u.amr):
            concept = u.amr.nodes[var]
            if concept in (UNKNOWN, MULTI_SENTENCE):
                continue
            if is_predicate_concept(concept):
                items.append((var, True))
            elif _is_argument(u.amr, var):
                items.append((var, False))
        per_utterance.append(items)

    pool = list(donor_pool) if config.cross_conversation else []
    candidates: list[tuple[int, str, list[str]]] = []
    for i, items in enumerate(per_utterance):
        amr = utterances[i].amr
        for var, predicate in items:
            concept = amr.nodes[var]
            donors: dict[str, None] = {}
            for j, other in enumerate(per_utterance):
                if j == i:
                    continue
                for donor_var, donor_predicate in other:
                    if donor_predicate == predicate:
                        donors.setdefault(utterances[j].amr.nodes[donor_var])
            for c in pool:
                if is_predicate_concept(c) == predicate:
                    donors.setdefault(c)
            donors.pop(concept, None)
            if donors:
                candidates.append((i, var, list(donors)))
    if not candidates:
        raise NotApplicableError("no item has a same-category donor concept")

    lo, hi = config.irrelevancy_count.bounded(len(candidates))
    picks = sorted(rng.sample(range(len(candidates)), rng.randint(lo, hi)))
    replacements: dict[int, dict[str, str]] = {}
    for n in picks:
        i, var, donors = candidates[n]
        replacements.setdefault(i, {})[var] = rng.choice(donors)

    steps = []
    for i, mapping in replacements.items():
        conversation, step = make_step(
            conversation, Manipulation.IRRELEVANCY, i, ConceptReplacement(replacements=mapping)
        )
        steps.append(step)
    return conversation, steps


# --------------------------------------------------------------------------------------------
# decreased engagement

def _question_plans(conversation: Conversation) -> list[tuple[int, int | None, str]]:
    """`(utterance, snt index or None for a whole-utterance drop, unit variable)` options."""
    options = []
    for i, u in enumerate(conversation.utterances):
        units = sentence_units(u)
        for k, var in units:
            if UNKNOWN not in {u.amr.nodes[v] for v in subtree_variables(u.amr, var)}:
                continue
            if len(units) > 1:
                options.append((i, k, var))
            elif len(conversation.utterances) > 1:
                options.append((i, None, var))
    return options


def _deepest_plans(conversation: Conversation) -> list[tuple[int, str]]:
    """`(utterance, subtree root)` options: the parent of the deepest node in each deepest AMR."""
    depths = [node_depths(u.amr) for u in conversation.utterances]
    deepest = max(max(d.values()) for d in depths)
    if deepest < 2:
        return []
    options = []
    for i, (u, d) in enumerate(zip(conversation.utterances, depths, strict=True)):
        if max(d.values()) != deepest:
            continue
        node = next(v for v, _ in traverse(u.amr) if d.get(v) == deepest)
        parent = next(
            e.source for e in u.amr.edges_into(node) if d.get(e.source) == deepest - 1
        )
        options.append((i, parent))
    return options


def _argument_plans(conversation: Conversation) -> list[tuple[int, list[str]]]:
    """`(utterance, removable argument fillers)` options."""
    options = []
    for i, u in enumerate(conversation.utterances):
        unit_roots = {v for _, v in sentence_units(u)} | {u.amr.root}
        targets: dict[str, None] = {}
        for _, var in sentence_units(u):
            for e in u.amr.edges_from(var):
                numbered = _is_numbered(e.role, ":ARG") or _is_numbered(e.role, ":op")
                if numbered and e.target not in unit_roots:
                    targets.setdefault(e.target)
        if targets:
            options.append((i, list(targets)))
    return options


def _is_numbered(role: str, prefix: str) -> bool:
    return role.startswith(prefix) and role[len(prefix) :].isdigit()


def decrease_engagement(
    conversation: Conversation,
    rng: Rng,
    strategy: EngagementStrategy | None = None,
    config: ManipulationConfig | None = None,
) -> ManipulationResult:
    """
    Makes a conversation less engaging by removing content:

    - `question`: delete a sentence unit that asks something (contains `amr-unknown`), or the
      whole utterance when that unit is all it says;
    - `deepest`: in the deepest AMR, delete the subtree rooted at the deepest node's parent;
    - `arguments`: delete 1-3 `:ARGn`/`:opn` fillers hanging off sentence-level concepts.

    Without `strategy`, one applicable strategy is drawn by `config.engagement_weights`.

    Raises:
        NotApplicableError: the requested strategy (or every strategy) has no target

    """
    config = config or ManipulationConfig()
    options = {
        EngagementStrategy.QUESTION: _question_plans(conversation),
        EngagementStrategy.DEEPEST: _deepest_plans(conversation),
        EngagementStrategy.ARGUMENTS: _argument_plans(conversation),
    }
    if strategy is None:
        usable = [
            s
            for s in EngagementStrategy
            if options[s] and config.engagement_weights.get(s, 0) > 0
        ]
        if not usable:
            raise NotApplicableError("no engagement strategy applies")
        strategy = rng.weighted_choice(usable, [config.engagement_weights[s] for s in usable])
    elif not options[strategy]:
        raise NotApplicableError(f"engagement strategy {strategy!s} does not apply")

    name = Manipulation.ENGAGEMENT
    match strategy:
        case EngagementStrategy.QUESTION:
            i, k, var = rng.choice(options[strategy])
            params = (
                UtteranceDrop()
                if k is None
                else SubtreeRemoval(strategy="question", variables=(var,))
            )
        case EngagementStrategy.DEEPEST:
            i, var = rng.choice(options[strategy])
            params = SubtreeRemoval(strategy="deepest", variables=(var,))
        case EngagementStrategy.ARGUMENTS:
            i, targets = rng.choice(options[strategy])
            lo, hi = config.argument_count.bounded(len(targets))
            picked = rng.sample(targets, rng.randint(lo, hi))
            params = SubtreeRemoval(strategy="arguments", variables=tuple(picked))

    logger.debug(f"{conversation.id}: engagement/{strategy!s} on utterance {i}")
    result, step = make_step(conversation, name, i, params)
    return result, [step]

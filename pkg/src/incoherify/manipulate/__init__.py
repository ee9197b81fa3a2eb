"""
Negative-example synthesis: AMR-level manipulations, text-level baselines, and the seeded
pipeline that composes and replays them.
"""

from incoherify.manipulate import baseline, compose, rng, semantic, steps
from incoherify.manipulate.baseline import (
    inject_random_utterance,
    plan_primitive,
    shuffle_speaker,
    shuffle_turns,
    swap_halves,
)
from incoherify.manipulate.compose import (
    apply_baseline,
    apply_manipulation,
    apply_pipeline,
    draw_plan,
    replay,
)
from incoherify.manipulate.rng import Rng, conversation_seed
from incoherify.manipulate.semantic import (
    ManipulationResult,
    contradict,
    coref_inconsistency,
    decrease_engagement,
    harvest_concepts,
    irrelevancy,
)
from incoherify.manipulate.steps import apply_parameters, apply_step, make_step

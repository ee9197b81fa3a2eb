"""
Run configuration. One JSON file holds three optional sections whose keys mirror the model
fields below, for example:

```json
{
    "manipulation": {"enabled": ["coreference", "irrelevancy"], "min_ops": 1, "max_ops": 2},
    "baseline": {"mix": "splicing"},
    "proxy": {"epochs": 30}
}
```
"""

from __future__ import annotations

import logging
from enum import StrEnum
from pathlib import Path
from typing import Annotated, Any

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from incoherify.errors import ConfigError

__all__ = [
    "BASELINE_PRESETS",
    "BaselineConfig",
    "BaselinePrimitive",
    "CountRange",
    "EngagementStrategy",
    "IncoherifyConfig",
    "Manipulation",
    "ManipulationConfig",
    "ManipulationMode",
    "ProxyConfig",
]

logger = logging.getLogger(__name__)


class Manipulation(StrEnum):
    CONTRADICTION = "contradiction"
    COREFERENCE = "coreference"
    IRRELEVANCY = "irrelevancy"
    ENGAGEMENT = "engagement"


class ManipulationMode(StrEnum):
    """How `manipulate` builds negatives: AMR-level semantic edits or text-level baselines."""

    SEMANTIC = "deam"
    BASELINE = "baseline"


class EngagementStrategy(StrEnum):
    QUESTION = "question"
    DEEPEST = "deepest"
    ARGUMENTS = "arguments"


class BaselinePrimitive(StrEnum):
    SHUFFLE_TURNS = "shuffle_turns"
    SHUFFLE_SPEAKER = "shuffle_speaker"
    SWAP_HALVES = "swap_halves"
    INSERT_RANDOM_UTTERANCE = "insert_random_utterance"
    REPLACE_RANDOM_UTTERANCE = "replace_random_utterance"


BASELINE_PRESETS: dict[str, tuple[BaselinePrimitive, ...]] = {
    "shuffling": (
        BaselinePrimitive.SHUFFLE_TURNS,
        BaselinePrimitive.SHUFFLE_SPEAKER,
        BaselinePrimitive.SWAP_HALVES,
    ),
    "splicing": (
        BaselinePrimitive.SHUFFLE_TURNS,
        BaselinePrimitive.SHUFFLE_SPEAKER,
        BaselinePrimitive.REPLACE_RANDOM_UTTERANCE,
        BaselinePrimitive.INSERT_RANDOM_UTTERANCE,
    ),
    "speaker": (
        BaselinePrimitive.SHUFFLE_SPEAKER,
        BaselinePrimitive.REPLACE_RANDOM_UTTERANCE,
    ),
}
"""Named primitive mixes, grouped the way prior work combines text-level negatives."""


class CountRange(BaseModel):
    """Inclusive `[lo, hi]` range for how many items an operation touches."""

    lo: Annotated[int, Field(ge=1)] = 1
    hi: Annotated[int, Field(ge=1)] = 3

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _ordered(self) -> CountRange:
        if self.lo > self.hi:
            raise ValueError(f"lo ({self.lo}) must not exceed hi ({self.hi})")
        return self

    def bounded(self, available: int) -> tuple[int, int]:
        """The range clipped to `available` items (assumes `available >= 1`)."""
        return min(self.lo, available), min(self.hi, available)


class ManipulationConfig(BaseModel):
    """Settings for the semantic manipulation pipeline."""

    enabled: tuple[Manipulation, ...] = tuple(Manipulation)
    """Manipulations the pipeline may sample. Drop one for a leave-one-out ablation."""

    min_ops: Annotated[int, Field(ge=1)] = 1
    max_ops: Annotated[int, Field(ge=1)] = 3

    pronouns: tuple[str, ...] = ("i", "you", "he", "she", "it", "we", "they")
    """Pronoun inventory for coreference inconsistency, subjective forms only."""

    coreference_count: CountRange = CountRange()
    irrelevancy_count: CountRange = CountRange()
    argument_count: CountRange = CountRange()
    """Edges removed by the `arguments` engagement strategy."""

    engagement_weights: dict[EngagementStrategy, Annotated[float, Field(ge=0)]] = {
        s: 1.0 for s in EngagementStrategy
    }
    """Relative odds of each engagement strategy when none is forced."""

    cross_conversation: bool = False
    """Let irrelevancy draw replacement concepts from other conversations of the corpus."""

    max_units: Annotated[int, Field(ge=1)] = 3
    """Longest run of sentence units a contradiction copies."""

    model_config = ConfigDict(frozen=True)

    @field_validator("enabled")
    @classmethod
    def _distinct(cls, value: tuple[Manipulation, ...]) -> tuple[Manipulation, ...]:
        if not value:
            raise ValueError("at least one manipulation must be enabled")
        if len(set(value)) != len(value):
            raise ValueError("enabled manipulations must be distinct")
        return value

    @field_validator("pronouns")
    @classmethod
    def _lowercase(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        pronouns = tuple(dict.fromkeys(p.strip().lower() for p in value))
        if len(pronouns) < 2:
            raise ValueError("the pronoun inventory needs at least two distinct pronouns")
        return pronouns

    @model_validator(mode="after")
    def _op_bounds(self) -> ManipulationConfig:
        if self.min_ops > self.max_ops:
            raise ValueError(f"min_ops ({self.min_ops}) must not exceed max_ops ({self.max_ops})")
        if self.max_ops > len(self.enabled):
            raise ValueError(
                f"max_ops ({self.max_ops}) exceeds the {len(self.enabled)} enabled manipulation(s)"
            )
        if not any(w > 0 for w in self.engagement_weights.values()):
            raise ValueError("at least one engagement strategy needs a positive weight")
        return self

    @property
    def pronoun_set(self) -> frozenset[str]:
        return frozenset(self.pronouns)


class BaselineConfig(BaseModel):
    mix: tuple[BaselinePrimitive, ...] = BASELINE_PRESETS["splicing"]
    """Primitives a baseline negative is drawn from; a preset name is accepted too."""

    model_config = ConfigDict(frozen=True)

    @field_validator("mix", mode="before")
    @classmethod
    def _expand_preset(cls, value: Any) -> Any:
        if isinstance(value, str):
            try:
                return BASELINE_PRESETS[value]
            except KeyError:
                raise ValueError(
                    f"unknown baseline preset {value!r}; known: {sorted(BASELINE_PRESETS)}"
                ) from None
        return value

    @field_validator("mix")
    @classmethod
    def _nonempty(cls, value: tuple[BaselinePrimitive, ...]) -> tuple[BaselinePrimitive, ...]:
        if not value:
            raise ValueError("baseline mix must name at least one primitive")
        return tuple(dict.fromkeys(value))


class ProxyConfig(BaseModel):
    """Hyperparameters of the hashed-feature logistic regression."""

    dim: int = 1 << 18
    epochs: Annotated[int, Field(ge=1)] = 20
    learning_rate: Annotated[float, Field(gt=0)] = 0.1
    l2: Annotated[float, Field(ge=0)] = 1e-6
    seed: Annotated[int, Field(ge=0)] = 0

    model_config = ConfigDict(frozen=True)

    @field_validator("dim")
    @classmethod
    def _power_of_two(cls, value: int) -> int:
        if value < 2 or value & (value - 1):
            raise ValueError(f"dim must be a power of two, got {value}")
        return value


class IncoherifyConfig(BaseModel):
    manipulation: ManipulationConfig = ManipulationConfig()
    baseline: BaselineConfig = BaselineConfig()
    proxy: ProxyConfig = ProxyConfig()

    model_config = ConfigDict(frozen=True, extra="forbid")

    @classmethod
    def load(cls, path: Path | str | None) -> IncoherifyConfig:
        """
        Reads a JSON config file; `None` gives the defaults.

        Raises:
            ConfigError: the file is missing or violates a config invariant

        """
        if path is None:
            return cls()
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read config '{path}': {e}") from e
        try:
            config = cls.model_validate_json(text)
        except ValidationError as e:
            problems = "; ".join(
                f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
            )
            raise ConfigError(f"invalid config '{path}': {problems}") from e
        logger.debug(f"Loaded config from '{path}'")
        return config

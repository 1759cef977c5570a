"""Style parameter registry, Big Five trait profiles, and style vectors.

The registry orders 26 named parameters: the five aggregation operations,
the nineteen pragmatic-marker families, and two lexical parameters
(contraction and pronominalization).  A trait profile assigns each
parameter high / low / dont_care; sampling broadens those settings into
per-utterance usage probabilities.  A style vector records, as one bit
per registry parameter, what a finished realization actually used.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .planner import AggregationOp
from .pragmatics import MarkerPlacement, marker_ids

HIGH = "high"
LOW = "low"
DONT_CARE = "dont_care"
SETTINGS = (HIGH, LOW, DONT_CARE)

# Broadening ranges for sampled usage probabilities.
HIGH_RANGE = (0.7, 1.0)
LOW_RANGE = (0.0, 0.1)
DONT_CARE_WEIGHT = 0.1

AGGREGATION_PARAMS = tuple(op.value for op in AggregationOp)
LEXICAL_PARAMS = ("contraction", "pronominalization")

REGISTRY_VERSION = "1"

TRAITS = (
    "agreeable",
    "disagreeable",
    "conscientious",
    "unconscientious",
    "extravert",
)

# Reserved profile name whose weights are pinned (not broadened): every
# proto-sentence in its own sentence, no markers, no contraction, no
# pronominalization.  Generation with it is seed-independent.
BASELINE_TRAIT = "none"


class PersonalityError(ValueError):
    pass


def parameter_registry() -> tuple[str, ...]:
    """All style parameter ids in fixed registry order (version 1)."""
    return AGGREGATION_PARAMS + marker_ids() + LEXICAL_PARAMS


def registry_length(version: str = REGISTRY_VERSION) -> int:
    if version != REGISTRY_VERSION:
        raise PersonalityError(f"unknown registry version: {version!r}")
    return len(parameter_registry())


@dataclass(frozen=True)
class TraitProfile:
    """Per-parameter high/low/dont_care settings for one personality."""

    name: str
    settings: Mapping[str, str]

    def __post_init__(self) -> None:
        registry = parameter_registry()
        unknown = set(self.settings) - set(registry)
        if unknown:
            raise PersonalityError(f"unknown parameters: {sorted(unknown)}")
        missing = set(registry) - set(self.settings)
        if missing:
            raise PersonalityError(f"parameters without a setting: {sorted(missing)}")
        bad = {v for v in self.settings.values() if v not in SETTINGS}
        if bad:
            raise PersonalityError(f"invalid settings: {sorted(bad)}")
        object.__setattr__(self, "settings", dict(self.settings))


@dataclass(frozen=True)
class StyleVector:
    """One boolean per registry parameter: 1 = used in this realization."""

    bits: tuple[int, ...]
    registry_version: str = REGISTRY_VERSION

    def __post_init__(self) -> None:
        expected = registry_length(self.registry_version)
        if len(self.bits) != expected:
            raise PersonalityError(
                f"style vector length {len(self.bits)} != registry length {expected}"
            )

    def as_string(self) -> str:
        return "".join(str(b) for b in self.bits)

    @classmethod
    def from_string(cls, text: str, registry_version: str = REGISTRY_VERSION
                    ) -> "StyleVector":
        if not set(text) <= {"0", "1"}:
            raise PersonalityError(f"not a 0/1 vector string: {text!r}")
        return cls(tuple(int(c) for c in text), registry_version)

    def used_parameters(self) -> tuple[str, ...]:
        registry = parameter_registry()
        return tuple(p for p, bit in zip(registry, self.bits) if bit)


def _profile_from_highs(
    name: str,
    high: Iterable[str],
    dont_care: Iterable[str] = (),
) -> TraitProfile:
    high = set(high)
    dont_care = set(dont_care)
    settings = {}
    for param in parameter_registry():
        if param in high:
            settings[param] = HIGH
        elif param in dont_care:
            settings[param] = DONT_CARE
        else:
            settings[param] = LOW
    return TraitProfile(name, settings)


def builtin_profiles() -> dict[str, TraitProfile]:
    """The five shipped Big Five trait profiles.

    High-valued parameters per trait follow the qualitative signatures of
    the sample outputs; the exact numeric tables behind the original
    trait models are not public, so these are editable defaults.
    """
    return {
        "agreeable": _profile_from_highs(
            "agreeable",
            high=(
                "also_cue", "confirmation", "ack_justification",
                "tag_question", "contraction", "pronominalization",
            ),
            dont_care=("with_cue", "conjunction", "all_merge"),
        ),
        "disagreeable": _profile_from_highs(
            "disagreeable",
            high=(
                "period", "competence_mitigation", "filled_pause_stative",
                "contraction", "pronominalization",
            ),
            dont_care=("exclaim", "initial_rejection"),
        ),
        "conscientious": _profile_from_highs(
            "conscientious",
            high=(
                "with_cue", "conjunction", "all_merge", "confirmation",
                "ack_justification", "down_subord", "pronominalization",
            ),
            dont_care=("also_cue", "contraction"),
        ),
        "unconscientious": _profile_from_highs(
            "unconscientious",
            high=(
                "all_merge", "conjunction", "expletives", "ack_yeah",
                "initial_rejection", "contraction",
            ),
            dont_care=(
                "also_cue", "with_cue", "filled_pause_stative",
                "pronominalization",
            ),
        ),
        "extravert": _profile_from_highs(
            "extravert",
            high=(
                "all_merge", "conjunction", "emphasizer", "emph_you_know",
                "contraction", "pronominalization",
            ),
            dont_care=("exclaim",),
        ),
    }


def baseline_profile() -> TraitProfile:
    """The pinned no-style profile (period only)."""
    settings = {param: LOW for param in parameter_registry()}
    settings["period"] = HIGH
    return TraitProfile(BASELINE_TRAIT, settings)


def baseline_weights() -> dict[str, float]:
    """Exact weights for the no-style profile: period 1.0, all else 0.0."""
    weights = {param: 0.0 for param in parameter_registry()}
    weights["period"] = 1.0
    return weights


def sample_weights(profile: TraitProfile, rng: random.Random) -> dict[str, float]:
    """Broaden a profile's settings into usage probabilities.

    high -> uniform in [0.7, 1.0]; low -> uniform in [0.0, 0.1];
    dont_care -> fixed 0.1.  The pinned baseline profile is returned
    exactly, with no sampling.
    """
    if profile.name == BASELINE_TRAIT:
        return baseline_weights()
    weights = {}
    for param in parameter_registry():
        setting = profile.settings[param]
        if setting == HIGH:
            weights[param] = rng.uniform(*HIGH_RANGE)
        elif setting == LOW:
            weights[param] = rng.uniform(*LOW_RANGE)
        else:
            weights[param] = DONT_CARE_WEIGHT
    return weights


def expected_weights(profile: TraitProfile) -> dict[str, float]:
    """Expected value of :func:`sample_weights` per parameter."""
    if profile.name == BASELINE_TRAIT:
        return baseline_weights()
    means = {
        HIGH: sum(HIGH_RANGE) / 2,
        LOW: sum(LOW_RANGE) / 2,
        DONT_CARE: DONT_CARE_WEIGHT,
    }
    return {
        param: means[profile.settings[param]]
        for param in parameter_registry()
    }


def style_vector_from_trace(
    ops_used: Iterable[AggregationOp | str],
    placements: Iterable[MarkerPlacement | str],
    lexical_flags: Mapping[str, bool] | None = None,
) -> StyleVector:
    """Deterministically encode what a realization actually used."""
    registry = parameter_registry()
    known = set(registry)
    used: set[str] = set()
    for op in ops_used:
        param = op.value if isinstance(op, AggregationOp) else str(op)
        if param not in known:
            raise PersonalityError(f"unknown aggregation parameter: {param!r}")
        used.add(param)
    for placement in placements:
        param = (
            placement.marker_id
            if isinstance(placement, MarkerPlacement)
            else str(placement)
        )
        if param not in known:
            raise PersonalityError(f"unknown marker parameter: {param!r}")
        used.add(param)
    for param, flag in (lexical_flags or {}).items():
        if param not in LEXICAL_PARAMS:
            raise PersonalityError(f"unknown lexical parameter: {param!r}")
        if flag:
            used.add(param)
    return StyleVector(tuple(int(p in used) for p in registry))


def load_profiles(path: str | Path) -> dict[str, TraitProfile]:
    """Read a profile file: one section per trait, parameter -> setting."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return {name: TraitProfile(name, settings) for name, settings in raw.items()}


def default_profiles() -> dict[str, TraitProfile]:
    """Shipped profile file (equivalent to :func:`builtin_profiles`)."""
    data = resources.files("traitgen.data").joinpath("profiles.json").read_text(
        encoding="utf-8"
    )
    raw = json.loads(data)
    return {name: TraitProfile(name, settings) for name, settings in raw.items()}


def resolve_profile(
    trait: str, profiles: Mapping[str, TraitProfile] | None = None
) -> TraitProfile:
    """Look up a trait name among built-ins (plus the baseline 'none')."""
    if trait == BASELINE_TRAIT:
        return baseline_profile()
    table = dict(profiles) if profiles is not None else builtin_profiles()
    if trait not in table:
        raise PersonalityError(f"unknown trait: {trait!r}")
    return table[trait]

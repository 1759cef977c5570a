"""Pragmatic markers: the 19-family registry and plan decoration.

Markers are content-free insertions (hedges, emphasizers, expletives,
tag questions, ...) attached to a sentence plan at syntactically
constrained insertion points.  Insertion never touches content words:
placements are stored alongside the plan and rendered by the realizer.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .mr import MeaningRepresentation
from .planner import SentencePlan, leaves_of


class Slot(Enum):
    UTTERANCE_INITIAL = "utterance_initial"
    SENTENCE_INITIAL = "sentence_initial"
    BEFORE_SCALAR_ADJECTIVE = "before_scalar_adjective"
    SENTENCE_FINAL = "sentence_final"
    UTTERANCE_FINAL = "utterance_final"
    AFTER_FIRST_MENTION = "after_first_mention"


class PragmaticsError(ValueError):
    pass


@dataclass(frozen=True)
class MarkerSpec:
    """One marker family: surface variants plus insertion constraints.

    ``standalone`` families render as their own leading sentence
    (request-confirmation templates carrying the restaurant name).
    ``pre_period`` families close the utterance-initial cluster with a
    period instead of flowing into the first sentence.  ``no_comma``
    variants glue to the following clause with a space (complementizer
    style: "everybody knows that it is ...").  ``scalar_attr`` restricts
    scalar insertion to one attribute's insertion point;
    ``scalar_variants`` / ``initial_variants``, when set, list the only
    variants usable at a scalar site (single-word expletives, not
    "oh god") or at a clause-initial site ("basically", not "just").
    """

    id: str
    variants: tuple[str, ...]
    slots: tuple[Slot, ...]
    punctuation: str | None = None
    standalone: bool = False
    pre_period: bool = False
    no_comma: tuple[str, ...] = ()
    scalar_attr: str | None = None
    scalar_variants: tuple[str, ...] | None = None
    initial_variants: tuple[str, ...] | None = None

    def variants_for_slot(self, slot: Slot) -> tuple[str, ...]:
        if slot == Slot.BEFORE_SCALAR_ADJECTIVE and self.scalar_variants:
            return self.scalar_variants
        if (
            slot in (Slot.SENTENCE_INITIAL, Slot.UTTERANCE_INITIAL)
            and self.initial_variants
        ):
            return self.initial_variants
        return self.variants


@dataclass(frozen=True)
class MarkerPlacement:
    """A concrete, guaranteed-to-surface marker insertion."""

    marker_id: str
    variant: str
    slot: Slot
    group: int | None = None
    leaf: int | None = None


_UI = Slot.UTTERANCE_INITIAL
_SI = Slot.SENTENCE_INITIAL
_SC = Slot.BEFORE_SCALAR_ADJECTIVE
_UF = Slot.UTTERANCE_FINAL

DEFAULT_MARKERS: tuple[MarkerSpec, ...] = (
    MarkerSpec("ack_definitive", ("right", "ok"), (_UI,)),
    MarkerSpec("ack_justification", ("I see", "well", "I see, well"), (_UI,)),
    MarkerSpec("ack_yeah", ("yeah",), (_UI,)),
    MarkerSpec(
        "confirmation",
        ("let's see what we can find on {name}", "did you say {name}?"),
        (_UI,),
        standalone=True,
    ),
    MarkerSpec(
        "initial_rejection",
        ("mmm", "I'm not sure", "I don't know"),
        (_UI,),
        pre_period=True,
    ),
    MarkerSpec(
        "competence_mitigation",
        ("come on", "obviously", "everybody knows that"),
        (_SI,),
        no_comma=("everybody knows that",),
    ),
    MarkerSpec("filled_pause_stative", ("err", "I mean", "mmhm"), (_UI, _SI)),
    MarkerSpec("down_kind_of", ("kind of",), (_SC,)),
    MarkerSpec("down_like", ("like",), (_SC,)),
    MarkerSpec("down_around", ("around",), (_SC,), scalar_attr="priceRange"),
    MarkerSpec("exclaim", ("!",), (_UF,), punctuation="!"),
    MarkerSpec("indicate_surprise", ("oh",), (_UI, _SI)),
    MarkerSpec(
        "general_softener", ("sort of", "somewhat", "quite", "rather"), (_SC,)
    ),
    MarkerSpec(
        "down_subord",
        ("I think that", "I guess"),
        (_SI,),
        no_comma=("I think that", "I guess"),
    ),
    MarkerSpec(
        "emphasizer",
        ("really", "basically", "actually", "just"),
        (_SI, _SC),
        initial_variants=("really", "basically", "actually"),
    ),
    MarkerSpec("emph_you_know", ("you know",), (_UF,)),
    MarkerSpec(
        "expletives",
        ("oh god", "damn", "oh gosh", "darn"),
        (_SI, _SC),
        scalar_variants=("damn", "darn"),
    ),
    MarkerSpec("in_group_marker", ("pal", "mate", "buddy", "friend"), (_UF,)),
    MarkerSpec(
        "tag_question", ("alright?", "you see?", "ok?"), (_UF,), punctuation="?"
    ),
)

# Rendering order for markers that share the utterance-initial cluster.
_CLUSTER_ORDER = (
    "expletives",
    "indicate_surprise",
    "ack_definitive",
    "ack_justification",
    "ack_yeah",
    "filled_pause_stative",
    "initial_rejection",
)


def marker_registry(config: dict | None = None) -> tuple[MarkerSpec, ...]:
    """The 19 marker families in stable order, with optional variant overrides.

    ``config`` may carry a ``markers`` section mapping family id to a
    variant list; unknown family ids are rejected.
    """
    registry = list(DEFAULT_MARKERS)
    if config:
        overrides = dict(config.get("markers", {}))
        known = {spec.id for spec in registry}
        unknown = set(overrides) - known
        if unknown:
            raise PragmaticsError(f"unknown marker families: {sorted(unknown)}")
        registry = [
            MarkerSpec(
                spec.id,
                tuple(overrides[spec.id]) if spec.id in overrides else spec.variants,
                spec.slots,
                spec.punctuation,
                spec.standalone,
                spec.pre_period,
                spec.no_comma,
                spec.scalar_attr,
                spec.scalar_variants,
                spec.initial_variants,
            )
            for spec in registry
        ]
    return tuple(registry)


def marker_ids(registry: tuple[MarkerSpec, ...] | None = None) -> tuple[str, ...]:
    return tuple(spec.id for spec in registry or DEFAULT_MARKERS)


def cluster_sort_key(placement: MarkerPlacement) -> int:
    try:
        return _CLUSTER_ORDER.index(placement.marker_id)
    except ValueError:
        return len(_CLUSTER_ORDER)


def _scalar_sites(plan: SentencePlan) -> list[tuple[int, int, str]]:
    """(leaf_index, group_index, attribute) for every scalar-capable leaf."""
    sites = []
    index = 0
    for group_index, group in enumerate(plan.groups):
        for proto in leaves_of(group):
            if proto.scalar_pos is not None:
                sites.append((index, group_index, proto.attribute))
            index += 1
    return sites


DEFAULT_MAX_FAMILIES = 3


def insert_markers(
    plan: SentencePlan,
    mr: MeaningRepresentation,
    weights: dict[str, float],
    rng: random.Random,
    registry: tuple[MarkerSpec, ...] | None = None,
    max_families: int = DEFAULT_MAX_FAMILIES,
) -> tuple[SentencePlan, list[MarkerPlacement]]:
    """Sample marker placements for the plan under the given weights.

    Every returned placement will surface in the linearized text; at most
    one marker lands on any concrete insertion point, each family places
    at most once per utterance, and at most ``max_families`` families are
    used in total.
    """
    specs = list(registry or DEFAULT_MARKERS)
    order = list(range(len(specs)))
    rng.shuffle(order)
    placements: list[MarkerPlacement] = []
    sentence_initial_taken: set[int] = set()
    scalar_taken: set[int] = set()
    utterance_final_taken = False
    standalone_taken = False
    name = mr.get("name")
    scalar_sites = _scalar_sites(plan)
    group_count = len(plan.groups)

    for spec_index in order:
        if len(placements) >= max_families:
            break
        spec = specs[spec_index]
        weight = float(weights.get(spec.id, 0.0))
        if rng.random() >= weight:
            continue
        candidate_sites: list[tuple[Slot, int | None, int | None]] = []
        for slot in spec.slots:
            if slot == Slot.UTTERANCE_INITIAL:
                if spec.standalone and (standalone_taken or name is None):
                    continue
                candidate_sites.append((slot, None, None))
            elif slot == Slot.SENTENCE_INITIAL:
                for g in range(group_count):
                    if g not in sentence_initial_taken:
                        candidate_sites.append((slot, g, None))
            elif slot == Slot.BEFORE_SCALAR_ADJECTIVE:
                for leaf_index, g, attr in scalar_sites:
                    if leaf_index in scalar_taken:
                        continue
                    if spec.scalar_attr is not None and attr != spec.scalar_attr:
                        continue
                    candidate_sites.append((slot, g, leaf_index))
            elif slot == Slot.UTTERANCE_FINAL:
                if not utterance_final_taken:
                    candidate_sites.append((slot, None, None))
        if not candidate_sites:
            continue
        slot, group, leaf = candidate_sites[rng.randrange(len(candidate_sites))]
        variants = spec.variants_for_slot(slot)
        variant = variants[rng.randrange(len(variants))]
        placements.append(MarkerPlacement(spec.id, variant, slot, group, leaf))
        if slot == Slot.SENTENCE_INITIAL:
            sentence_initial_taken.add(group)  # type: ignore[arg-type]
        elif slot == Slot.BEFORE_SCALAR_ADJECTIVE:
            scalar_taken.add(leaf)  # type: ignore[arg-type]
        elif slot == Slot.UTTERANCE_FINAL:
            utterance_final_taken = True
        elif spec.standalone:
            standalone_taken = True

    return plan.with_markers(tuple(placements)), placements

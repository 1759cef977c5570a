"""Surface realization: linearize a decorated sentence plan into text.

Composes the whole pipeline: look up proto-sentences, aggregate them,
insert pragmatic markers, linearize with orthographic post-processing,
and record the style vector actually used.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass

from .lexicon import Lexicon, ProtoSentence
from .mr import MeaningRepresentation
from .planner import (
    AggregationOp,
    Leaf,
    OpNode,
    PlanNode,
    SentencePlan,
    aggregate,
    leaves_of,
)
from .pragmatics import (
    MarkerPlacement,
    MarkerSpec,
    Slot,
    cluster_sort_key,
    insert_markers,
    marker_registry,
)
from .personality import (
    StyleVector,
    TraitProfile,
    sample_weights,
    style_vector_from_trace,
)

# Realization order of attributes within an utterance (name becomes the
# subject of the first clause rather than its own sentence).
CONTENT_ORDER = (
    "eatType",
    "customerRating",
    "priceRange",
    "area",
    "food",
    "familyFriendly",
    "near",
)


class GenerationError(ValueError):
    pass


@dataclass(frozen=True)
class Realization:
    """A finished utterance plus its provenance."""

    text: str
    personalities: tuple[str, ...]
    mr: MeaningRepresentation
    style_vector: StyleVector
    seed: int
    delexicalized: bool = False

    @property
    def personality(self) -> str:
        return ",".join(self.personalities)


def _units(node: PlanNode, scalar_for: dict[int, str], counter: list[int]) -> list[str]:
    """Flatten an all-merge subtree into complement units.

    Prepositional complements attach to the preceding unit by
    juxtaposition ("an Italian restaurant in riverside"); other units are
    listed and later joined with commas and "and".
    """
    if isinstance(node, Leaf):
        index = counter[0]
        counter[0] += 1
        text = node.proto.complement_text(scalar_for.get(index))
        if node.proto.is_pp:
            return ["\x00" + text]  # mark for juxtaposition
        return [text]
    if node.op == AggregationOp.ALL_MERGE:
        left = _units(node.left, scalar_for, counter)
        right = _units(node.right, scalar_for, counter)
        units = list(left)
        for unit in right:
            if unit.startswith("\x00") and units:
                units[-1] = f"{units[-1]} {unit[1:]}"
            else:
                units.append(unit)
        return units
    if node.op == AggregationOp.WITH_CUE:
        left = _units(node.left, scalar_for, counter)
        index = counter[0]
        counter[0] += 1
        with_np = node.right.proto.complement_text(scalar_for.get(index))  # type: ignore[union-attr]
        if left:
            left[-1] = f"{left[-1]} with {with_np}"
        return left
    raise GenerationError(f"cannot flatten {node.op} inside a merge")


def _join_units(units: list[str]) -> str:
    units = [u[1:] if u.startswith("\x00") else u for u in units]
    if len(units) == 1:
        return units[0]
    return ", ".join(units[:-1]) + " and " + units[-1]


def _render_node(
    node: PlanNode,
    subject: str,
    scalar_for: dict[int, str],
    counter: list[int],
) -> str:
    if isinstance(node, Leaf):
        index = counter[0]
        counter[0] += 1
        return f"{subject} {node.proto.verb_phrase(scalar_for.get(index))}"
    if node.op == AggregationOp.ALL_MERGE:
        units = _units(node, scalar_for, counter)
        return f"{subject} is {_join_units(units)}"
    if node.op == AggregationOp.WITH_CUE:
        left = _render_node(node.left, subject, scalar_for, counter)
        index = counter[0]
        counter[0] += 1
        with_np = node.right.proto.complement_text(scalar_for.get(index))  # type: ignore[union-attr]
        return f"{left} with {with_np}"
    if node.op == AggregationOp.CONJUNCTION:
        left = _render_node(node.left, subject, scalar_for, counter)
        right = _leaf_vp(node.right, scalar_for, counter)
        return f"{left}{node.joiner}it {right}"
    if node.op == AggregationOp.ALSO_CUE:
        left = _render_node(node.left, subject, scalar_for, counter)
        right = _leaf_vp(node.right, scalar_for, counter)
        return f"{left}, also it {right}"
    raise GenerationError(f"cannot render op {node.op}")


def _leaf_vp(node: PlanNode, scalar_for: dict[int, str], counter: list[int]) -> str:
    if isinstance(node, Leaf):
        index = counter[0]
        counter[0] += 1
        return node.proto.verb_phrase(scalar_for.get(index))
    if node.op == AggregationOp.ALL_MERGE:
        units = _units(node, scalar_for, counter)
        return f"is {_join_units(units)}"
    raise GenerationError(f"cannot render {node.op} as a verb phrase")


def _capitalize(sentence: str) -> str:
    for i, ch in enumerate(sentence):
        if ch.isalpha():
            return sentence[:i] + ch.upper() + sentence[i + 1:]
    return sentence


# "is not" must contract first so "it is not" becomes "it isn't",
# matching the attested outputs, rather than "it's not".
_CONTRACTIONS = (
    (re.compile(r"\bis not\b"), "isn't"),
    (re.compile(r"\bit is\b"), "it's"),
    (re.compile(r"\bIt is\b"), "It's"),
)


def apply_contractions(text: str) -> tuple[str, int]:
    total = 0
    for pattern, replacement in _CONTRACTIONS:
        text, n = pattern.subn(replacement, text)
        total += n
    return text, total


_SPACES = re.compile(r"\s{2,}")
_SPACE_BEFORE_PUNCT = re.compile(r"\s+([.,!?])")


def tidy(text: str) -> str:
    text = _SPACES.sub(" ", text.strip())
    text = _SPACE_BEFORE_PUNCT.sub(r"\1", text)
    return text


def linearize(
    plan: SentencePlan,
    contraction: bool = False,
    registry: tuple[MarkerSpec, ...] | None = None,
) -> str:
    """Render a (possibly marker-decorated) plan as final surface text."""
    text, _ = _linearize_traced(plan, contraction, registry)
    return text


def _linearize_traced(
    plan: SentencePlan,
    contraction: bool,
    registry: tuple[MarkerSpec, ...] | None = None,
) -> tuple[str, dict[str, bool]]:
    specs = {spec.id: spec for spec in (registry or marker_registry())}
    leaves = plan.leaves()
    if not leaves:
        raise GenerationError("cannot linearize an empty plan")
    name_subject = leaves[0].subject

    standalone: list[str] = []
    cluster: list[MarkerPlacement] = []
    sentence_initial: dict[int, MarkerPlacement] = {}
    scalar_for: dict[int, str] = {}
    final_marker: MarkerPlacement | None = None
    for placement in plan.markers:
        spec = specs[placement.marker_id]
        if placement.slot == Slot.UTTERANCE_INITIAL:
            if spec.standalone:
                body = placement.variant.format(name=name_subject)
                punct = "?" if body.endswith("?") else "."
                standalone.append(_capitalize(body.rstrip("?. ")) + punct)
            else:
                cluster.append(placement)
        elif placement.slot == Slot.SENTENCE_INITIAL:
            sentence_initial[placement.group] = placement  # type: ignore[index]
        elif placement.slot == Slot.BEFORE_SCALAR_ADJECTIVE:
            scalar_for[placement.leaf] = placement.variant  # type: ignore[index]
        elif placement.slot == Slot.UTTERANCE_FINAL:
            final_marker = placement

    counter = [0]
    sentences: list[str] = []
    for g, group in enumerate(plan.groups):
        subject = "it" if plan.pronoun_flags[g] else name_subject
        body = _render_node(group, subject, scalar_for, counter)
        prefix_placement = sentence_initial.get(g)
        if prefix_placement is not None:
            spec = specs[prefix_placement.marker_id]
            glue = " " if prefix_placement.variant in spec.no_comma else ", "
            body = f"{prefix_placement.variant}{glue}{body}"
        sentences.append(body)

    cluster.sort(key=cluster_sort_key)
    lead: list[str] = list(standalone)
    if cluster:
        cluster_text = ", ".join(p.variant for p in cluster)
        ends_with_period = any(
            specs[p.marker_id].pre_period for p in cluster
        )
        if ends_with_period:
            lead.append(_capitalize(cluster_text) + ".")
        else:
            sentences[0] = f"{cluster_text}, {sentences[0]}"

    final_punct = "."
    if final_marker is not None:
        spec = specs[final_marker.marker_id]
        if spec.punctuation is not None:
            final_punct = spec.punctuation
        if final_marker.variant not in ("", "!"):
            suffix = final_marker.variant.rstrip("?!. ")
            sentences[-1] = f"{sentences[-1]}, {suffix}"

    rendered = [
        _capitalize(s) + "." for s in sentences[:-1]
    ] + [_capitalize(sentences[-1]) + final_punct]
    text = " ".join(lead + rendered)

    applied = 0
    if contraction:
        text, applied = apply_contractions(text)
    text = tidy(text)
    flags = {
        "contraction": applied > 0,
        "pronominalization": any(plan.pronoun_flags),
    }
    return text, flags


def build_protos(
    mr: MeaningRepresentation, lexicon: Lexicon
) -> list[ProtoSentence]:
    """Proto-sentences for an MR in fixed realization order.

    The name value supplies the subject of every clause and is not
    realized as a sentence of its own.
    """
    name = mr.get("name")
    if name is None:
        raise GenerationError("generation requires a name slot for the subject")
    present = dict(mr.slots)
    protos = []
    for attr in CONTENT_ORDER:
        if attr in present:
            protos.append(
                lexicon.realize_attribute(attr, present[attr], subject=name)
            )
    if not protos:
        raise GenerationError("MR has no content besides the name")
    return protos


def generate(
    mr: MeaningRepresentation,
    profile: TraitProfile,
    seed: int = 0,
    lexicon: Lexicon | None = None,
    registry: tuple[MarkerSpec, ...] | None = None,
    max_marker_families: int | None = None,
    max_leaves_per_sentence: int | None = None,
) -> Realization:
    """Run the full pipeline for one (MR, profile, seed) triple."""
    lexicon = lexicon or Lexicon.default()
    registry = registry or marker_registry()
    rng = random.Random(seed)
    weights = sample_weights(profile, rng)
    protos = build_protos(mr, lexicon)
    plan = aggregate(
        protos, weights, rng, max_leaves_per_sentence=max_leaves_per_sentence
    )
    kwargs = {}
    if max_marker_families is not None:
        kwargs["max_families"] = max_marker_families
    plan, placements = insert_markers(
        plan, mr, weights, rng, registry=registry, **kwargs
    )
    use_contraction = rng.random() < weights.get("contraction", 0.0)
    text, flags = _linearize_traced(plan, use_contraction, registry)
    style_vector = style_vector_from_trace(
        plan.ops_used(), placements, flags
    )
    return Realization(
        text=text,
        personalities=(profile.name,),
        mr=mr,
        style_vector=style_vector,
        seed=seed,
    )

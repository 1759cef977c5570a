"""Sentence planning: combine proto-sentences with aggregation operations.

The planner pairs adjacent proto-sentences greedily left to right.  For
each pair it samples an operation from the normalized operation weights;
if the sampled operation cannot apply, it falls back through a fixed
order (all-merge, conjunction, also-cue, with-cue, period).  A period
closes the current sentence group, so the result is an ordered list of
sentence trees whose leaves are exactly the input proto-sentences.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Union

from .lexicon import POSITIVE, ProtoSentence

if TYPE_CHECKING:  # pragma: no cover
    from .pragmatics import MarkerPlacement


class AggregationOp(Enum):
    PERIOD = "period"
    WITH_CUE = "with_cue"
    CONJUNCTION = "conjunction"
    ALL_MERGE = "all_merge"
    ALSO_CUE = "also_cue"


FALLBACK_ORDER = (
    AggregationOp.ALL_MERGE,
    AggregationOp.CONJUNCTION,
    AggregationOp.ALSO_CUE,
    AggregationOp.WITH_CUE,
    AggregationOp.PERIOD,
)

# Conjunction surfaces either as "X and it is Z" or the comma splice
# "X, it is Z"; both are sampled.
CONJUNCTION_JOINERS = (" and ", ", ")


class PlanningError(ValueError):
    pass


@dataclass(frozen=True)
class Leaf:
    proto: ProtoSentence


@dataclass(frozen=True)
class OpNode:
    op: AggregationOp
    left: "PlanNode"
    right: "PlanNode"
    joiner: str = ""


PlanNode = Union[Leaf, OpNode]


def leaves_of(node: PlanNode) -> list[ProtoSentence]:
    if isinstance(node, Leaf):
        return [node.proto]
    return leaves_of(node.left) + leaves_of(node.right)


def ops_of(node: PlanNode) -> set[AggregationOp]:
    if isinstance(node, Leaf):
        return set()
    return {node.op} | ops_of(node.left) | ops_of(node.right)


@dataclass(frozen=True)
class SentencePlan:
    """Ordered sentence groups plus per-group subject-pronoun flags."""

    groups: tuple[PlanNode, ...]
    pronoun_flags: tuple[bool, ...]
    markers: tuple["MarkerPlacement", ...] = ()

    def leaves(self) -> list[ProtoSentence]:
        out: list[ProtoSentence] = []
        for group in self.groups:
            out.extend(leaves_of(group))
        return out

    def ops_used(self) -> set[AggregationOp]:
        used: set[AggregationOp] = set()
        for group in self.groups:
            used |= ops_of(group)
        if len(self.groups) > 1:
            used.add(AggregationOp.PERIOD)
        return used

    def with_markers(self, markers: tuple["MarkerPlacement", ...]) -> "SentencePlan":
        return SentencePlan(self.groups, self.pronoun_flags, markers)


def _merge_verb(node: PlanNode) -> str | None:
    """Verb a further all-merge would share, or None if not mergeable."""
    if isinstance(node, Leaf):
        if node.proto.polarity != POSITIVE:
            return None
        return node.proto.verb
    if node.op == AggregationOp.ALL_MERGE:
        return _merge_verb(node.left)
    if node.op == AggregationOp.WITH_CUE:
        return _merge_verb(node.left)
    return None


def _tail_clause(node: PlanNode) -> ProtoSentence | None:
    """Rightmost leaf whose clause a with-phrase would attach to."""
    if isinstance(node, Leaf):
        return node.proto
    return _tail_clause(node.right)


def _mergeable_right(node: PlanNode) -> bool:
    return (
        isinstance(node, Leaf)
        and node.proto.polarity == POSITIVE
        and node.proto.verb == "is"
    )


def _try_apply(
    op: AggregationOp, left: PlanNode, right: PlanNode, rng: random.Random
) -> PlanNode | None:
    """Combine two nodes with the given op, or return None if incompatible."""
    if op == AggregationOp.ALL_MERGE:
        if not _mergeable_right(right):
            return None
        if _merge_verb(left) == "is":
            return OpNode(op, left, right)
        if isinstance(left, OpNode) and left.op in (
            AggregationOp.CONJUNCTION,
            AggregationOp.ALSO_CUE,
        ):
            # Merge into the clause most recently opened by the cue.
            inner = _try_apply(op, left.right, right, rng)
            if inner is not None:
                return OpNode(left.op, left.left, inner, left.joiner)
        return None
    if op == AggregationOp.CONJUNCTION:
        if not isinstance(right, Leaf):
            return None
        return OpNode(op, left, right, joiner=rng.choice(CONJUNCTION_JOINERS))
    if op == AggregationOp.ALSO_CUE:
        if not isinstance(right, Leaf):
            return None
        return OpNode(op, left, right)
    if op == AggregationOp.WITH_CUE:
        if not (
            isinstance(right, Leaf)
            and right.proto.attribute == "customerRating"
            and right.proto.polarity == POSITIVE
        ):
            return None
        tail = _tail_clause(left)
        if tail is None or tail.polarity != POSITIVE or tail.verb != "is":
            return None
        return OpNode(op, left, right)
    raise PlanningError(f"apply_op cannot apply {op}")


def apply_op(
    op: AggregationOp,
    left: PlanNode,
    right: PlanNode,
    rng: random.Random | None = None,
) -> PlanNode:
    """Combine two plan nodes; raises PlanningError when incompatible."""
    if op == AggregationOp.PERIOD:
        raise PlanningError("period is a group boundary, not a combining op")
    node = _try_apply(op, left, right, rng or random.Random(0))
    if node is None:
        raise PlanningError(f"{op.value} cannot combine these nodes")
    return node


def _sample_op(
    weights: dict[str, float], rng: random.Random
) -> AggregationOp:
    ops = list(AggregationOp)
    raw = [max(0.0, float(weights.get(op.value, 0.0))) for op in ops]
    total = sum(raw)
    if total <= 0.0:
        return AggregationOp.PERIOD
    pick = rng.random() * total
    cumulative = 0.0
    for op, weight in zip(ops, raw):
        cumulative += weight
        if pick < cumulative:
            return op
    return ops[-1]


def aggregate(
    protos: list[ProtoSentence],
    weights: dict[str, float],
    rng: random.Random,
    max_leaves_per_sentence: int | None = None,
) -> SentencePlan:
    """Build a sentence plan over the proto-sentences.

    The leaves of the result, read left to right, are exactly ``protos``.
    """
    if not protos:
        raise PlanningError("cannot aggregate an empty proto-sentence list")
    use_pronoun = rng.random() < float(weights.get("pronominalization", 0.0))
    groups: list[PlanNode] = []
    current: PlanNode = Leaf(protos[0])
    for proto in protos[1:]:
        incoming: PlanNode = Leaf(proto)
        forced_split = (
            max_leaves_per_sentence is not None
            and len(leaves_of(current)) >= max_leaves_per_sentence
        )
        combined: PlanNode | None = None
        if not forced_split:
            sampled = _sample_op(weights, rng)
            candidates = [sampled] + [
                op for op in FALLBACK_ORDER if op != sampled
            ]
            for op in candidates:
                if op == AggregationOp.PERIOD:
                    break
                combined = _try_apply(op, current, incoming, rng)
                if combined is not None:
                    break
        if combined is None:
            groups.append(current)
            current = incoming
        else:
            current = combined
    groups.append(current)
    flags = tuple(
        i > 0 and use_pronoun for i in range(len(groups))
    )
    return SentencePlan(tuple(groups), flags)

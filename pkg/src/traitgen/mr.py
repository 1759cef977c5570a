"""Meaning representations: parsing, canonical form, and delexicalization.

An MR is a dialogue act plus attribute[value] slots, written as e.g.

    inform(name[Fitzbillies], eatType[pub], area[riverside])

Slots are stored in canonical order (attribute name, lexicographic) so that
any permutation of the same slots parses to an equal MR.  The two
proper-noun attributes, ``name`` and ``near``, can be swapped for fixed
placeholder tokens and restored later.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

ATTRIBUTES = (
    "name",
    "eatType",
    "food",
    "priceRange",
    "customerRating",
    "area",
    "familyFriendly",
    "near",
)

PROPER_NOUN_ATTRIBUTES = ("name", "near")

NAME_PLACEHOLDER = "NAME_PLACEHOLDER"
NEAR_PLACEHOLDER = "NEAR_PLACEHOLDER"
PLACEHOLDER_FOR = {"name": NAME_PLACEHOLDER, "near": NEAR_PLACEHOLDER}

# Accept common surface spellings of attribute names ("customer rating",
# "CustomerRating", ...) and map them onto the canonical eight.
_CANONICAL_ATTR = {a.lower().replace(" ", ""): a for a in ATTRIBUTES}

MAX_PERSONALITIES = 2


class MRError(ValueError):
    """Base class for meaning-representation errors."""


class MRParseError(MRError):
    """Base class for errors raised while parsing an MR string."""


class MalformedMRError(MRParseError):
    """The input does not match ``act(attr[value], ...)``."""


class UnknownAttributeError(MRParseError):
    """An attribute name outside the closed eight-attribute set."""


class DuplicateAttributeError(MRParseError):
    """The same attribute appears more than once."""


class EmptyValueError(MRParseError):
    """A slot with an empty value string."""


class UnknownPlaceholderError(MRError):
    """Relexicalization found a placeholder with no mapping."""


def canonical_attribute(raw: str) -> str:
    """Normalize an attribute spelling to its canonical name, or raise."""
    key = raw.strip().lower().replace(" ", "")
    try:
        return _CANONICAL_ATTR[key]
    except KeyError:
        raise UnknownAttributeError(f"unknown attribute name: {raw!r}") from None


def _clean_value(raw: str) -> str:
    value = raw.strip()
    if len(value) >= 2 and value[0] == value[-1] and value[0] in "'\"":
        value = value[1:-1].strip()
    return value


@dataclass(frozen=True)
class MeaningRepresentation:
    """A dialogue act with canonically ordered attribute/value slots.

    Instances are immutable; the constructor validates the slot set and
    re-sorts it into canonical order, so two MRs with the same content
    always compare equal.
    """

    slots: tuple[tuple[str, str], ...]
    act: str = "inform"
    personalities: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        seen: set[str] = set()
        cleaned = []
        for attr, value in self.slots:
            attr = canonical_attribute(attr)
            if attr in seen:
                raise DuplicateAttributeError(f"duplicate attribute: {attr}")
            seen.add(attr)
            value = _clean_value(str(value))
            if not value:
                raise EmptyValueError(f"empty value for attribute: {attr}")
            cleaned.append((attr, value))
        cleaned.sort(key=lambda slot: slot[0])
        object.__setattr__(self, "slots", tuple(cleaned))
        object.__setattr__(self, "personalities", tuple(self.personalities))
        if len(self.personalities) > MAX_PERSONALITIES:
            raise MRError(
                f"at most {MAX_PERSONALITIES} personality labels per MR, "
                f"got {len(self.personalities)}"
            )

    def get(self, attr: str) -> str | None:
        attr = canonical_attribute(attr)
        for slot_attr, value in self.slots:
            if slot_attr == attr:
                return value
        return None

    @property
    def attributes(self) -> tuple[str, ...]:
        return tuple(attr for attr, _ in self.slots)

    def replace_value(self, attr: str, value: str) -> "MeaningRepresentation":
        attr = canonical_attribute(attr)
        new_slots = tuple(
            (a, value if a == attr else v) for a, v in self.slots
        )
        return MeaningRepresentation(new_slots, self.act, self.personalities)


_MR_SHAPE = re.compile(r"^\s*([A-Za-z_]+)\s*\((.*)\)\s*$", re.DOTALL)
_SLOT = re.compile(r"\s*([^\[\],]+)\[([^\[\]]*)\]\s*")


def parse_mr(text: str) -> MeaningRepresentation:
    """Parse ``act(attr1[val1], attr2[val2], ...)`` into a canonical MR."""
    shape = _MR_SHAPE.match(text)
    if shape is None:
        raise MalformedMRError(f"not of the form act(...): {text!r}")
    act, body = shape.group(1), shape.group(2)
    slots: list[tuple[str, str]] = []
    pos = 0
    body = body.strip()
    while pos < len(body):
        match = _SLOT.match(body, pos)
        if match is None:
            raise MalformedMRError(
                f"malformed slot near position {pos}: {body[pos:pos + 30]!r}"
            )
        slots.append((match.group(1), match.group(2)))
        pos = match.end()
        if pos < len(body):
            if body[pos] != ",":
                raise MalformedMRError(
                    f"expected ',' between slots near position {pos} in {text!r}"
                )
            pos += 1
    if not slots:
        raise MalformedMRError(f"MR has no slots: {text!r}")
    return MeaningRepresentation(tuple(slots), act=act)


def format_mr(mr: MeaningRepresentation) -> str:
    """Render the canonical textual form; inverse of :func:`parse_mr`."""
    body = ", ".join(f"{attr}[{value}]" for attr, value in mr.slots)
    return f"{mr.act}({body})"


def delexicalize(
    mr: MeaningRepresentation, text: str
) -> tuple[MeaningRepresentation, str, dict[str, str]]:
    """Replace proper-noun values in both the MR and text with placeholders.

    Returns ``(mr', text', lexmap)`` where ``lexmap`` maps each placeholder
    back to the original string.  An entry is recorded for every proper-noun
    attribute present in the MR even if the text never mentions the value.
    """
    lexmap: dict[str, str] = {}
    new_mr = mr
    replacements: list[tuple[str, str]] = []
    for attr in PROPER_NOUN_ATTRIBUTES:
        value = mr.get(attr)
        if value is None:
            continue
        placeholder = PLACEHOLDER_FOR[attr]
        lexmap[placeholder] = value
        new_mr = new_mr.replace_value(attr, placeholder)
        replacements.append((value, placeholder))
    # Longest value first so one proper noun embedded in another cannot be
    # partially rewritten.
    replacements.sort(key=lambda pair: len(pair[0]), reverse=True)
    new_text = text
    for value, placeholder in replacements:
        new_text = new_text.replace(value, placeholder)
    return new_mr, new_text, lexmap


_PLACEHOLDER_TOKEN = re.compile(r"\b\w+_PLACEHOLDER\b")


def relexicalize(text: str, lexmap: dict[str, str]) -> str:
    """Restore placeholder tokens from a LexMap; inverse of delexicalize."""
    for placeholder, original in lexmap.items():
        text = text.replace(placeholder, original)
    leftover = _PLACEHOLDER_TOKEN.search(text)
    if leftover is not None:
        raise UnknownPlaceholderError(
            f"no mapping for placeholder {leftover.group(0)!r}"
        )
    return text


def relexicalize_mr(
    mr: MeaningRepresentation, lexmap: dict[str, str]
) -> MeaningRepresentation:
    """Restore placeholder slot values from a LexMap."""
    restored = mr
    for attr in PROPER_NOUN_ATTRIBUTES:
        value = mr.get(attr)
        if value is None:
            continue
        if value in lexmap:
            restored = restored.replace_value(attr, lexmap[value])
        elif _PLACEHOLDER_TOKEN.fullmatch(value):
            raise UnknownPlaceholderError(f"no mapping for placeholder {value!r}")
    return restored


def load_mrs(path: str | Path) -> list[MeaningRepresentation]:
    """Read a newline-delimited MR file; ``#``-prefixed lines are comments."""
    mrs: list[MeaningRepresentation] = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            mrs.append(parse_mr(line))
        except MRParseError as exc:
            raise MRParseError(f"{path}:{lineno}: {exc}") from exc
    return mrs


def save_mrs(mrs: list[MeaningRepresentation], path: str | Path) -> None:
    Path(path).write_text(
        "".join(format_mr(mr) + "\n" for mr in mrs), encoding="utf-8"
    )

"""Attribute dictionary entries and value-realization variants.

The dictionary maps each attribute to the fields of one simple sentence
("Fitzbillies is a pub.").  The variants table maps (attribute, value)
pairs to the surface strings that count as a mention of that value; it
feeds both generation (canonical surface) and error detection (matching
candidate texts against correct and sibling values).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .mr import (
    ATTRIBUTES,
    MeaningRepresentation,
    PROPER_NOUN_ATTRIBUTES,
    UnknownAttributeError,
    canonical_attribute,
)

POSITIVE = "positive"
NEGATIVE = "negative"

# Words whose spelling and onset sound disagree for a/an selection.
_AN_EXCEPTIONS = {"honest", "hour", "heir", "honor", "honour", "honourable"}
_A_EXCEPTIONS = {"university", "unique", "uniform", "user", "european", "one", "once"}


def indefinite_article(phrase: str) -> str:
    """Choose "a" or "an" for the given phrase by vowel-letter onset."""
    words = phrase.split()
    word = words[0].lower() if words else ""
    if word in _AN_EXCEPTIONS:
        return "an"
    if word in _A_EXCEPTIONS:
        return "a"
    return "an" if word[:1] in "aeiou" else "a"


class LexiconError(ValueError):
    """Raised for unknown entries or an inconsistent lexicon file."""


@dataclass(frozen=True)
class ProtoSentence:
    """One attribute realized as the fields of a simple sentence.

    ``complement`` holds the article-less complement body; the indefinite
    article, when required, is chosen at render time so that an inserted
    scalar modifier can shift a/an agreement ("an average rating" vs.
    "a somewhat average rating").  ``scalar_pos`` is the character offset
    of the single optional scalar-modifier insertion point, or None.
    ``is_pp`` marks prepositional complements ("in riverside"), which merge
    into a preceding phrase by juxtaposition rather than conjunction.
    """

    attribute: str
    value: str
    subject: str
    verb: str
    complement: str
    polarity: str = POSITIVE
    needs_article: bool = False
    scalar_pos: int | None = None
    is_pp: bool = False

    def complement_text(self, scalar_marker: str | None = None) -> str:
        body = self.complement
        if scalar_marker is not None:
            if self.scalar_pos is None:
                raise LexiconError(
                    f"attribute {self.attribute} has no scalar insertion point"
                )
            body = (
                body[: self.scalar_pos] + scalar_marker + " "
                + body[self.scalar_pos:]
            )
        if self.needs_article:
            body = f"{indefinite_article(body)} {body}"
        return body

    def verb_phrase(self, scalar_marker: str | None = None) -> str:
        verb = self.verb if self.polarity == POSITIVE else f"{self.verb} not"
        return f"{verb} {self.complement_text(scalar_marker)}"

    def render(self, subject: str | None = None,
               scalar_marker: str | None = None) -> str:
        """Linearize as a standalone clause (no final punctuation)."""
        return f"{subject or self.subject} {self.verb_phrase(scalar_marker)}"


def default_config() -> dict:
    data = resources.files("traitgen.data").joinpath("lexicon.json").read_text(
        encoding="utf-8"
    )
    return json.loads(data)


class Lexicon:
    """Immutable dictionary + variants store, loaded once from config."""

    def __init__(self, config: dict):
        self._dictionary: dict[str, dict] = {}
        for attr, entry in config.get("dictionary", {}).items():
            self._dictionary[canonical_attribute(attr)] = dict(entry)
        self._surfaces: dict[str, dict[str, dict]] = {}
        for attr, table in config.get("value_surfaces", {}).items():
            normalized = {}
            for value, surface in table.items():
                if isinstance(surface, str):
                    surface = {"text": surface}
                normalized[value] = surface
            self._surfaces[canonical_attribute(attr)] = normalized
        self._variants: dict[str, dict[str, frozenset[str]]] = {}
        for attr, table in config.get("variants", {}).items():
            attr = canonical_attribute(attr)
            self._variants[attr] = {
                value: frozenset(variants) for value, variants in table.items()
            }
        missing = [a for a in ATTRIBUTES if a not in self._dictionary]
        if missing:
            raise LexiconError(f"dictionary entries missing for: {missing}")
        self._check_disjoint()

    @classmethod
    def default(cls) -> "Lexicon":
        return cls(default_config())

    @classmethod
    def from_file(cls, path: str | Path) -> "Lexicon":
        config = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(config)

    def _check_disjoint(self) -> None:
        for attr, table in self._variants.items():
            values = sorted(table)
            for i, first in enumerate(values):
                for second in values[i + 1:]:
                    shared = table[first] & table[second]
                    if shared:
                        raise LexiconError(
                            f"variant sets overlap for {attr}: "
                            f"{first!r}/{second!r} share {sorted(shared)}"
                        )

    def realize_attribute(
        self,
        attr: str,
        value: str,
        polarity: str | None = None,
        subject: str | None = None,
    ) -> ProtoSentence:
        """Build the ProtoSentence realizing one attribute/value slot."""
        attr = canonical_attribute(attr)
        entry = self._dictionary.get(attr)
        if entry is None:
            raise UnknownAttributeError(f"no dictionary entry for {attr!r}")
        if not value:
            raise LexiconError(f"empty value for attribute {attr}")
        if polarity is None:
            polarity = (
                NEGATIVE if value in entry.get("negate_on", ()) else POSITIVE
            )
        surface_entry = self._surfaces.get(attr, {}).get(value, {"text": value})
        surface = surface_entry["text"]
        allow_scalar = surface_entry.get("scalar", True)
        complement = entry["complement"].replace("{value}", surface)
        needs_article = complement.startswith("{article} ")
        if needs_article:
            complement = complement[len("{article} "):]
        scalar_pos = None
        if "{scalar}" in complement:
            pos = complement.index("{scalar}")
            complement = complement.replace("{scalar}", "")
            if allow_scalar:
                scalar_pos = pos
        return ProtoSentence(
            attribute=attr,
            value=value,
            subject=subject or entry.get("subject", "it"),
            verb=entry["verb"],
            complement=complement,
            polarity=polarity,
            needs_article=needs_article,
            scalar_pos=scalar_pos,
            is_pp=bool(entry.get("pp", False)),
        )

    def value_variants(self, attr: str, value: str) -> frozenset[str]:
        """Surface strings counting as a mention of (attr, value)."""
        attr = canonical_attribute(attr)
        if attr in PROPER_NOUN_ATTRIBUTES:
            return frozenset({value})
        table = self._variants.get(attr, {})
        if value not in table:
            raise LexiconError(f"no variants for {attr}[{value}]")
        return table[value]

    def sibling_variants(self, attr: str, value: str) -> dict[str, frozenset[str]]:
        """Variant sets of the other known values of the same attribute."""
        attr = canonical_attribute(attr)
        if attr in PROPER_NOUN_ATTRIBUTES:
            return {}
        table = self._variants.get(attr, {})
        return {v: variants for v, variants in table.items() if v != value}

    def known_values(self, attr: str) -> tuple[str, ...]:
        attr = canonical_attribute(attr)
        return tuple(sorted(self._variants.get(attr, {})))

    def covers(self, mr: MeaningRepresentation) -> bool:
        """True when every slot of the MR can be realized and matched."""
        try:
            for attr, value in mr.slots:
                self.realize_attribute(attr, value)
                self.value_variants(attr, value)
        except (LexiconError, UnknownAttributeError):
            return False
        return True

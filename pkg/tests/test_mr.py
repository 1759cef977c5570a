from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from traitgen.mr import (
    ATTRIBUTES,
    DuplicateAttributeError,
    EmptyValueError,
    MalformedMRError,
    MeaningRepresentation,
    NAME_PLACEHOLDER,
    NEAR_PLACEHOLDER,
    UnknownAttributeError,
    UnknownPlaceholderError,
    delexicalize,
    format_mr,
    load_mrs,
    parse_mr,
    relexicalize,
    relexicalize_mr,
    save_mrs,
)
from conftest import EIGHT_SLOT_MR


def test_parse_figure_mr_has_eight_slots():
    mr = parse_mr(EIGHT_SLOT_MR)
    assert mr.act == "inform"
    assert len(mr.slots) == 8
    assert mr.get("name") == "The Eagle"
    assert mr.get("near") == "Burger King"
    assert mr.get("customerRating") == "average"


def test_single_slot_round_trip():
    assert format_mr(parse_mr("inform(name[X])")) == "inform(name[X])"


def test_canonical_reordering_matches_reference_sort():
    shuffled = parse_mr("inform(food[Italian], name[Fitzbillies])")
    # Oracle: sort the slot list with the standard library, independently
    # of the parser's own canonicalization.
    reference = sorted([("food", "Italian"), ("name", "Fitzbillies")])
    assert list(shuffled.slots) == reference
    assert shuffled == parse_mr("inform(name[Fitzbillies], food[Italian])")


def test_any_permutation_parses_equal():
    slots = [
        ("name", "The Eagle"), ("eatType", "pub"), ("area", "riverside"),
        ("food", "French"), ("familyFriendly", "no"),
    ]
    rng = random.Random(7)
    base = None
    for _ in range(10):
        rng.shuffle(slots)
        text = "inform(" + ", ".join(f"{a}[{v}]" for a, v in slots) + ")"
        mr = parse_mr(text)
        if base is None:
            base = mr
        assert mr == base


def test_attribute_aliases_normalized():
    mr = parse_mr("inform(name[X], customer rating[decent], PriceRange[high], eatType[pub])")
    assert mr.get("customerRating") == "decent"
    assert mr.get("priceRange") == "high"


def test_quoted_values_unwrapped():
    mr = parse_mr("inform(name[X], near['The Sorrento'])")
    assert mr.get("near") == "The Sorrento"


@pytest.mark.parametrize(
    "text,error",
    [
        ("inform(colour[red])", UnknownAttributeError),
        ("inform(name[X], name[Y])", DuplicateAttributeError),
        ("inform(name[])", EmptyValueError),
        ("inform(name[X", MalformedMRError),
        ("name[X]", MalformedMRError),
        ("inform()", MalformedMRError),
        ("inform(name[X] eatType[pub])", MalformedMRError),
    ],
)
def test_distinct_parse_errors(text, error):
    with pytest.raises(error):
        parse_mr(text)


_VALUES = st.text(
    alphabet="abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 £-",
    min_size=1,
    max_size=20,
).filter(lambda s: s.strip() == s and s)


@given(
    st.dictionaries(
        st.sampled_from(ATTRIBUTES), _VALUES, min_size=1, max_size=8
    )
)
@settings(max_examples=200, deadline=None)
def test_parse_format_round_trip_property(slot_map):
    mr = MeaningRepresentation(tuple(slot_map.items()))
    assert parse_mr(format_mr(mr)) == mr


def test_delexicalize_replaces_both_proper_nouns(eight_slot_mr):
    text = "The Eagle is a coffee shop near Burger King in the city centre."
    dmr, dtext, lexmap = delexicalize(eight_slot_mr, text)
    assert NAME_PLACEHOLDER in dtext and NEAR_PLACEHOLDER in dtext
    assert "Eagle" not in dtext and "Burger King" not in dtext
    assert dmr.get("name") == NAME_PLACEHOLDER
    assert dmr.get("near") == NEAR_PLACEHOLDER
    assert lexmap == {
        NAME_PLACEHOLDER: "The Eagle",
        NEAR_PLACEHOLDER: "Burger King",
    }


def test_delexicalize_records_entries_even_when_absent_from_text(eight_slot_mr):
    text = "A nice venue."
    dmr, dtext, lexmap = delexicalize(eight_slot_mr, text)
    assert dtext == text
    assert set(lexmap) == {NAME_PLACEHOLDER, NEAR_PLACEHOLDER}


def test_relexicalize_unknown_placeholder_is_an_error():
    with pytest.raises(UnknownPlaceholderError):
        relexicalize(f"text with {NEAR_PLACEHOLDER}", {NAME_PLACEHOLDER: "X"})


_NAMES = st.sampled_from(
    ["The Eagle", "Fitzbillies", "Browns Cambridge", "The Golden Fox",
     "Cafe Rouge", "The Old Mill"]
)


@given(
    name=_NAMES,
    near=_NAMES,
    mentions_name=st.integers(min_value=0, max_value=3),
    mentions_near=st.integers(min_value=0, max_value=2),
)
@settings(max_examples=100, deadline=None)
def test_delex_relex_round_trip_property(name, near, mentions_name, mentions_near):
    if near == name:
        return
    mr = MeaningRepresentation(
        (("name", name), ("near", near), ("eatType", "pub"))
    )
    text = " ".join(
        [f"{name} is a pub."] * mentions_name
        + [f"It is near {near}."] * mentions_near
    ) or "No mention at all."
    dmr, dtext, lexmap = delexicalize(mr, text)
    assert relexicalize(dtext, lexmap) == text
    assert relexicalize_mr(dmr, lexmap) == mr


def test_mr_file_round_trip_with_comments(tmp_path):
    path = tmp_path / "mrs.txt"
    path.write_text(
        "# a comment line\n"
        "inform(name[X], eatType[pub])\n"
        "\n"
        "inform(name[Y], area[riverside])\n",
        encoding="utf-8",
    )
    mrs = load_mrs(path)
    assert len(mrs) == 2
    out = tmp_path / "out.txt"
    save_mrs(mrs, out)
    assert load_mrs(out) == mrs


def test_mr_file_parse_error_reports_line(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("inform(name[X])\ninform(banana[1])\n", encoding="utf-8")
    with pytest.raises(UnknownAttributeError, match="bad.txt:2"):
        load_mrs(path)


def test_personality_cap():
    with pytest.raises(ValueError):
        MeaningRepresentation(
            (("name", "X"),), personalities=("a", "b", "c")
        )

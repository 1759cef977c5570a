from __future__ import annotations

import itertools

import pytest

from traitgen.lexicon import Lexicon, LexiconError, indefinite_article
from traitgen.mr import ATTRIBUTES, UnknownAttributeError, load_mrs
from traitgen.corpus import VALUE_POOLS, NAME_POOL, NEAR_POOL


def test_table_row_realizations(lexicon):
    assert lexicon.realize_attribute(
        "eatType", "pub", subject="Fitzbillies"
    ).render() == "Fitzbillies is a pub"
    assert lexicon.realize_attribute(
        "customerRating", "decent", subject="Fitzbillies"
    ).render() == "Fitzbillies has a decent rating"
    negative = lexicon.realize_attribute(
        "familyFriendly", "no", subject="Fitzbillies"
    )
    assert negative.polarity == "negative"
    assert negative.render() == "Fitzbillies is not family friendly"
    assert lexicon.realize_attribute(
        "priceRange", "moderate", subject="Fitzbillies"
    ).render() == "Fitzbillies is moderately priced"
    assert lexicon.realize_attribute(
        "food", "Italian", subject="Fitzbillies"
    ).render() == "Fitzbillies is an Italian restaurant"
    assert lexicon.realize_attribute(
        "near", "The Sorrento", subject="Fitzbillies"
    ).render() == "Fitzbillies is near The Sorrento"
    assert lexicon.realize_attribute(
        "area", "riverside", subject="Fitzbillies"
    ).render() == "Fitzbillies is in riverside"


def test_unknown_attribute_rejected(lexicon):
    with pytest.raises(UnknownAttributeError):
        lexicon.realize_attribute("colour", "red")


def test_value_variants_exact_sets(lexicon):
    assert lexicon.value_variants("priceRange", "high") == {
        "high priced", "expensive"
    }
    assert lexicon.value_variants("familyFriendly", "yes") == {
        "family friendly", "kid friendly", "families"
    }
    assert lexicon.value_variants("area", "riverside") == {
        "riverside", "in riverside"
    }
    assert lexicon.value_variants("customerRating", "average") == {
        "average", "three star"
    }


def test_unknown_value_pair_is_an_error(lexicon):
    with pytest.raises(LexiconError):
        lexicon.value_variants("priceRange", "stratospheric")


def test_proper_noun_variants_are_open(lexicon):
    assert lexicon.value_variants("name", "Anything At All") == {
        "Anything At All"
    }
    assert lexicon.sibling_variants("near", "X") == {}


def test_variant_disjointness_exhaustive(lexicon):
    # Brute force: every pair of values of every attribute must have
    # disjoint variant sets.
    for attr in ATTRIBUTES:
        if attr in ("name", "near"):
            continue
        values = lexicon.known_values(attr)
        for a, b in itertools.combinations(values, 2):
            overlap = lexicon.value_variants(attr, a) & lexicon.value_variants(attr, b)
            assert not overlap, (attr, a, b, overlap)


def test_disjointness_enforced_at_load():
    config = {
        "dictionary": {a: {"verb": "is", "complement": "x"} for a in ATTRIBUTES},
        "variants": {"area": {"riverside": ["x"], "city centre": ["x"]}},
    }
    with pytest.raises(LexiconError, match="overlap"):
        Lexicon(config)


def test_missing_dictionary_entry_rejected():
    with pytest.raises(LexiconError, match="missing"):
        Lexicon({"dictionary": {"name": {"verb": "is", "complement": "x"}}})


def test_at_most_one_scalar_insertion_point(lexicon):
    for attr in ATTRIBUTES:
        if attr in ("name", "near"):
            values = ("Some Venue",)
        else:
            values = lexicon.known_values(attr) or (None,)
        for value in values:
            if value is None:
                continue
            proto = lexicon.realize_attribute(attr, value)
            # scalar_pos is a single optional offset by construction; check
            # that inserting a marker produces exactly one new token span.
            if proto.scalar_pos is not None:
                plain = proto.complement_text()
                marked = proto.complement_text("really")
                assert marked.count("really") == plain.count("really") + 1


def test_canonical_surface_among_variants(lexicon):
    # The surface the generator produces for a value must itself be
    # detectable via that value's variant set.
    for attr in ("eatType", "food", "priceRange", "customerRating", "area",
                 "familyFriendly"):
        for value in lexicon.known_values(attr):
            proto = lexicon.realize_attribute(attr, value)
            clause = proto.render(subject="The Venue").lower()
            variants = lexicon.value_variants(attr, value)
            assert any(v.lower() in clause for v in variants), (attr, value, clause)


def test_realizes_every_value_in_shipped_mr_files(lexicon):
    from importlib import resources

    for filename in ("mrs_train_sample.txt", "mrs_test_sample.txt"):
        path = resources.files("traitgen.data").joinpath(filename)
        for mr in load_mrs(str(path)):
            assert lexicon.covers(mr), mr


def test_realizes_every_pool_value(lexicon):
    for attr, values in VALUE_POOLS.items():
        for value in values:
            lexicon.realize_attribute(attr, value)
            lexicon.value_variants(attr, value)
    for name in NAME_POOL[:5] + NEAR_POOL[:5]:
        lexicon.realize_attribute("name", name)


@pytest.mark.parametrize(
    "phrase,article",
    [
        ("Italian restaurant", "an"),
        ("pub", "a"),
        ("average rating", "an"),
        ("excellent rating", "an"),
        ("honest venue", "an"),
        ("university cafe", "a"),
        ("English restaurant", "an"),
    ],
)
def test_indefinite_article_cases(phrase, article):
    assert indefinite_article(phrase) == article


def test_article_agreement_against_word_list_oracle():
    # Brute-force oracle over the domain vocabulary: a word takes "an"
    # exactly when its onset letter is a vowel (no silent-h or u-glide
    # words appear in the shipped pools).
    words = set()
    for values in VALUE_POOLS.values():
        words.update(values)
    words.update({"pub", "coffee shop", "restaurant", "rating"})
    for word in words:
        expected = "an" if word[0].lower() in "aeiou" else "a"
        assert indefinite_article(word) == expected, word

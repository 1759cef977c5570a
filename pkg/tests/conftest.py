from __future__ import annotations

import pytest

from traitgen.lexicon import Lexicon
from traitgen.mr import parse_mr
from traitgen.personality import builtin_profiles

# The eight-attribute exemplar MR and its attested realizations.
TABLE_MR = (
    "inform(name[Fitzbillies], eatType[pub], food[Italian], "
    "priceRange[moderate], customer rating[decent], area[riverside], "
    "familyFriendly[no], near['The Sorrento'])"
)

GOLDEN_BASELINE = (
    "Fitzbillies is a pub. Fitzbillies has a decent rating. "
    "Fitzbillies is moderately priced. Fitzbillies is in riverside. "
    "Fitzbillies is an Italian restaurant. Fitzbillies is not family friendly. "
    "Fitzbillies is near The Sorrento."
)

AGREEABLE_TEXT = (
    "Let's see what we can find on Fitzbillies. I see, well it is a pub "
    "with a decent rating, also it is an Italian restaurant in riverside "
    "and moderately priced near The Sorrento, also it isn't family "
    "friendly, you see?"
)

DISAGREEABLE_TEXT = (
    "I mean, everybody knows that moderately priced Fitzbillies is in "
    "riverside with a decent rating. It's near The Sorrento. It isn't "
    "family friendly. It is an Italian place. It is a pub."
)

EIGHT_SLOT_MR = (
    "inform(name[The Eagle], eatType[coffee shop], food[English], "
    "priceRange[high], customerRating[average], area[city centre], "
    "familyFriendly[yes], near[Burger King])"
)


@pytest.fixture(scope="session")
def lexicon() -> Lexicon:
    return Lexicon.default()


@pytest.fixture(scope="session")
def profiles():
    return builtin_profiles()


@pytest.fixture(scope="session")
def table_mr():
    return parse_mr(TABLE_MR)


@pytest.fixture(scope="session")
def eight_slot_mr():
    return parse_mr(EIGHT_SLOT_MR)

import datetime
import json
import random

import pytest

from hopqa.comparator import (
    AmbiguousPrecision,
    ComparableValue,
    ComparisonOutcome,
    IncomparableKinds,
    UnknownPolarity,
    compare,
    compare_values,
    is_equality_question,
    load_polarity_table,
    parse_value,
    question_polarity,
    resolve_final,
)

MONTH_NAMES = (
    "January", "February", "March", "April", "May", "June",
    "July", "August", "September", "October", "November", "December",
)


# --- parsing ------------------------------------------------------------------


def test_parse_month_day_year():
    value = parse_value("January 28, 1956)")
    assert (value.kind, value.year, value.month, value.day) == ("date", 1956, 1, 28)


def test_parse_day_month_year():
    value = parse_value("(6 February 1932")
    assert (value.kind, value.year, value.month, value.day) == ("date", 1932, 2, 6)


def test_parse_bare_year():
    value = parse_value("1985")
    assert (value.kind, value.year, value.month, value.day) == ("date", 1985, None, None)
    assert parse_value("1985.").year == 1985


def test_parse_year_range_is_bounded():
    # Only millennium-1/2 four-digit strings read as years.
    assert parse_value("0985").kind == "number"
    assert parse_value("3985").kind == "number"


def test_parse_numbers_with_thousands_separators():
    assert parse_value("2,432").number == 2432.0
    assert parse_value("1,234,567").number == 1234567.0
    assert parse_value("17").number == 17.0
    assert parse_value("3.5").number == 3.5


def test_parse_unparsed():
    value = parse_value("Chano Urueta")
    assert value.kind == "unparsed"
    assert not value.is_parsed
    assert value.raw == "Chano Urueta"


def test_parse_strips_edge_punctuation_and_quotes():
    assert parse_value('"8 January 1969,"').day == 8
    assert parse_value("“23 May 2003”").year == 2003


def test_parse_case_insensitive_months():
    assert parse_value("28 january 1956").month == 1
    assert parse_value("JULY 4, 1776").month == 7


# --- polarity and equality cues -------------------------------------------------


def test_polarity_table_values_validated(tmp_path):
    table = load_polarity_table()
    assert set(table.values()) <= {"smaller_wins", "larger_wins"}
    assert table  # non-empty by construction
    bad = tmp_path / "polarity.json"
    bad.write_text(json.dumps({"huger": "widest_wins"}), encoding="utf-8")
    with pytest.raises(ValueError):
        load_polarity_table(str(bad))


def test_question_polarity_cues():
    assert question_polarity("Who was born earlier, A or B?") == "smaller_wins"
    assert question_polarity("Who is older, A or B?") == "smaller_wins"
    assert question_polarity("Who is younger, A or B?") == "larger_wins"
    assert question_polarity("Which film came out later, A or B?") == "larger_wins"
    assert question_polarity("Which film has the director died later, A or B?") == "larger_wins"


def test_question_polarity_first_cue_wins():
    # Both cues present: the earlier one in the question decides.
    assert question_polarity("Who died earlier and lived later?") == "smaller_wins"


def test_question_polarity_unknown():
    with pytest.raises(UnknownPolarity):
        question_polarity("Which film is better?")


def test_is_equality_question():
    assert is_equality_question("Are both films from the same country?")
    assert is_equality_question("Were A and B born on equal dates?")
    assert is_equality_question("Are they equally old?")
    assert not is_equality_question("Who is older?")
    # Word-boundary: "sameness" must not trigger.
    assert not is_equality_question("A question about sameness of style.")


# --- compare_values: brute-force date grid against datetime --------------------


def _full_date(y, m, d):
    return ComparableValue("date", f"{d} {MONTH_NAMES[m - 1]} {y}", year=y, month=m, day=d)


def test_full_date_grid_matches_datetime():
    years = (1956, 1969, 2003)
    days = (1, 8, 15, 23, 28)
    values = [
        (datetime.date(y, m, d), _full_date(y, m, d))
        for y in years
        for m in range(1, 13)
        for d in days
    ]
    for da, va in values:
        for db, vb in values:
            want = (da > db) - (da < db)
            assert compare_values(va, vb) == want, (va.raw, vb.raw)


def test_compare_values_antisymmetry_random():
    rng = random.Random(1234)
    for _ in range(1000):
        ya, yb = rng.randint(1800, 2100), rng.randint(1800, 2100)
        ma, mb = rng.randint(1, 12), rng.randint(1, 12)
        da_, db_ = rng.randint(1, 28), rng.randint(1, 28)
        a, b = _full_date(ya, ma, da_), _full_date(yb, mb, db_)
        assert compare_values(a, b) == -compare_values(b, a)


def test_polarity_inversion_random():
    # Flipping polarity must flip FIRST/LAST verdicts and fix EQUAL.
    rng = random.Random(5678)
    smaller_q = "Which came out earlier, A or B?"
    larger_q = "Which came out later, A or B?"
    for _ in range(1000):
        a = _full_date(rng.randint(1900, 1905), rng.randint(1, 12), rng.randint(1, 28))
        b = _full_date(rng.randint(1900, 1905), rng.randint(1, 12), rng.randint(1, 28))
        first = compare(smaller_q, a, b)
        second = compare(larger_q, a, b)
        if first is ComparisonOutcome.EQUAL:
            assert second is ComparisonOutcome.EQUAL
        else:
            flipped = {
                ComparisonOutcome.FIRST_MEETS: ComparisonOutcome.LAST_MEETS,
                ComparisonOutcome.LAST_MEETS: ComparisonOutcome.FIRST_MEETS,
            }[first]
            assert second is flipped


def test_year_only_dates_compare():
    a = ComparableValue("date", "1951", year=1951)
    b = ComparableValue("date", "1959", year=1959)
    assert compare_values(a, b) == -1
    assert compare_values(b, a) == 1
    assert compare_values(a, a) == 0


def test_mixed_precision_raises_when_prefix_agrees():
    year_only = ComparableValue("date", "1956", year=1956)
    full = _full_date(1956, 1, 28)
    with pytest.raises(AmbiguousPrecision):
        compare_values(year_only, full)
    with pytest.raises(AmbiguousPrecision):
        compare_values(full, year_only)


def test_mixed_precision_resolves_when_prefix_differs():
    year_only = ComparableValue("date", "1951", year=1951)
    full = _full_date(1956, 1, 28)
    assert compare_values(year_only, full) == -1


def test_number_comparison():
    a = parse_value("4,432")
    b = parse_value("4433")
    assert compare_values(a, b) == -1
    assert compare_values(b, a) == 1
    assert compare_values(a, parse_value("4432")) == 0


def test_incomparable_kinds():
    date = parse_value("1985")
    number = parse_value("42")
    text = parse_value("Chano Urueta")
    with pytest.raises(IncomparableKinds):
        compare_values(date, number)
    with pytest.raises(IncomparableKinds):
        compare_values(text, text)
    with pytest.raises(IncomparableKinds):
        compare("Who is older, A or B?", date, text)


# --- full outcome decisions ------------------------------------------------------


def test_outcome_values_are_pinned():
    assert ComparisonOutcome.NOT_EQUAL == 0
    assert ComparisonOutcome.EQUAL == 1
    assert ComparisonOutcome.FIRST_MEETS == 2
    assert ComparisonOutcome.LAST_MEETS == 3


def test_compare_superlative_dates():
    early = parse_value("8 January 1969")
    late = parse_value("23 May 2003")
    q_earlier = "Which director died earlier, A or B?"
    q_later = "Which director died later, A or B?"
    assert compare(q_earlier, early, late) is ComparisonOutcome.FIRST_MEETS
    assert compare(q_later, early, late) is ComparisonOutcome.LAST_MEETS
    assert compare(q_later, late, early) is ComparisonOutcome.FIRST_MEETS


def test_compare_equality_questions_shared_precision():
    q = "Were both films released in the same year?"
    a = ComparableValue("date", "1956", year=1956)
    b = _full_date(1956, 1, 28)
    assert compare(q, a, b) is ComparisonOutcome.EQUAL
    c = ComparableValue("date", "1959", year=1959)
    assert compare(q, a, c) is ComparisonOutcome.NOT_EQUAL


def test_compare_equal_values_without_equality_cue():
    q = "Which film came out earlier, A or B?"
    a = parse_value("1985")
    assert compare(q, a, a) is ComparisonOutcome.EQUAL


def test_compare_unparsed_raises():
    with pytest.raises(IncomparableKinds):
        compare("Who is older?", parse_value("Chano"), parse_value("1985"))


def test_resolve_final():
    subjects = ("First Film", "Second Film")
    assert resolve_final(ComparisonOutcome.FIRST_MEETS, subjects) == "First Film"
    assert resolve_final(ComparisonOutcome.LAST_MEETS, subjects) == "Second Film"
    assert resolve_final(ComparisonOutcome.EQUAL, subjects) == "yes"
    assert resolve_final(ComparisonOutcome.NOT_EQUAL, subjects) == "no"

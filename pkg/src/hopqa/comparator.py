"""Deterministic value parsing and comparison for comparison-family questions.

Answers are parsed into dates ("January 28, 1956", "18 July 1971", "1985",
tolerant of stray edge punctuation) or plain numbers.  The comparison
outcome states are wire-stable small integers: 0 not-equal, 1 equal,
2 the first option meets the question, 3 the last option meets it.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .spans import MONTH_NUMBER, MONTHS

_MONTH_RE = "|".join(MONTHS)
_MDY = re.compile(rf"({_MONTH_RE})\s+(\d{{1,2}}),\s*(\d{{3,4}})$", re.IGNORECASE)
_DMY = re.compile(rf"(\d{{1,2}})\s+({_MONTH_RE})\s+(\d{{3,4}})$", re.IGNORECASE)
_YEAR = re.compile(r"([12]\d{3})$")
_NUMBER = re.compile(r"[-+]?\d{1,3}(?:,\d{3})+(?:\.\d+)?$|[-+]?\d+(?:\.\d+)?$")
_EDGE = " \t\n\r.,;:!?()[]{}\"'«»“”‘’…–—"


class IncomparableKinds(Exception):
    """The two values cannot be compared (unparsed or differing kinds)."""


class UnknownPolarity(Exception):
    """No cue in the question says whether smaller or larger wins."""


class AmbiguousPrecision(Exception):
    """Values are equal at shared precision but one carries more detail."""


class ComparisonOutcome(enum.IntEnum):
    NOT_EQUAL = 0
    EQUAL = 1
    FIRST_MEETS = 2
    LAST_MEETS = 3


@dataclass(frozen=True)
class ComparableValue:
    kind: str  # "date" | "number" | "unparsed"
    raw: str
    year: int | None = None
    month: int | None = None
    day: int | None = None
    number: float | None = None

    @property
    def is_parsed(self) -> bool:
        return self.kind != "unparsed"


def parse_value(raw: str) -> ComparableValue:
    """Parse a raw answer string into a comparable value."""
    text = raw.strip(_EDGE)
    m = _MDY.match(text)
    if m:
        return ComparableValue(
            "date", raw,
            year=int(m.group(3)), month=MONTH_NUMBER[m.group(1).casefold()],
            day=int(m.group(2)),
        )
    m = _DMY.match(text)
    if m:
        return ComparableValue(
            "date", raw,
            year=int(m.group(3)), month=MONTH_NUMBER[m.group(2).casefold()],
            day=int(m.group(1)),
        )
    m = _YEAR.match(text)
    if m:
        return ComparableValue("date", raw, year=int(m.group(1)))
    m = _NUMBER.match(text)
    if m:
        return ComparableValue("number", raw, number=float(text.replace(",", "")))
    return ComparableValue("unparsed", raw)


@lru_cache(maxsize=8)
def load_polarity_table(path: str | None = None) -> dict:
    """Cue phrase -> "smaller_wins" | "larger_wins"; user-extensible."""
    if path is None:
        with resources.files("hopqa.data").joinpath("polarity.json").open(encoding="utf-8") as handle:
            data = json.load(handle)
    else:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    if not isinstance(data, dict):
        raise ValueError("polarity table must be a JSON object")
    bad = {v for v in data.values()} - {"smaller_wins", "larger_wins"}
    if bad:
        raise ValueError(f"unknown polarity value(s): {sorted(bad)}")
    return {k.casefold(): v for k, v in data.items()}


_EQUALITY_CUES = ("same", "equal", "equally")


def is_equality_question(question: str) -> bool:
    folded = question.casefold()
    return any(re.search(rf"(?<!\w){cue}(?!\w)", folded) for cue in _EQUALITY_CUES)


def question_polarity(question: str, table: dict | None = None) -> str:
    """First polarity cue in the question, longest cues tried first."""
    table = table if table is not None else load_polarity_table()
    folded = question.casefold()
    hits = []
    for cue in sorted(table, key=lambda c: (-len(c), c)):
        m = re.search(rf"(?<!\w){re.escape(cue)}(?!\w)", folded)
        if m and not any(m.start() < e and s < m.end() for s, e in (h[0] for h in hits)):
            hits.append(((m.start(), m.end()), table[cue]))
    if not hits:
        raise UnknownPolarity(f"no polarity cue in question: {question!r}")
    hits.sort(key=lambda h: h[0][0])
    return hits[0][1]


def _compare_dates(a: ComparableValue, b: ComparableValue) -> int:
    """-1/0/+1 chronological order at shared precision."""
    for field_name in ("year", "month", "day"):
        av, bv = getattr(a, field_name), getattr(b, field_name)
        if av is None and bv is None:
            return 0
        if av is None or bv is None:
            raise AmbiguousPrecision(
                f"{a.raw!r} and {b.raw!r} agree up to {field_name} but differ in precision"
            )
        if av != bv:
            return -1 if av < bv else 1
    return 0


def compare_values(first: ComparableValue, last: ComparableValue) -> int:
    """-1/0/+1 value order; raises on mixed or unparsed kinds."""
    if first.kind != last.kind or not first.is_parsed:
        raise IncomparableKinds(f"{first.kind} vs {last.kind}")
    if first.kind == "date":
        return _compare_dates(first, last)
    if first.number < last.number:
        return -1
    if first.number > last.number:
        return 1
    return 0


def _dates_equal_shared(a: ComparableValue, b: ComparableValue) -> bool:
    for field_name in ("year", "month", "day"):
        av, bv = getattr(a, field_name), getattr(b, field_name)
        if av is None or bv is None:
            return True  # shared precision exhausted without a mismatch
        if av != bv:
            return False
    return True


def compare(
    question: str,
    first: ComparableValue,
    last: ComparableValue,
    polarity_table: dict | None = None,
) -> ComparisonOutcome:
    """Decide the comparison outcome for two parsed values.

    Equality-phrased questions ("... the same ...?") compare at shared
    precision; superlatives need a polarity cue naming which extreme wins.
    """
    if not first.is_parsed or not last.is_parsed:
        raise IncomparableKinds(f"unparsed value: {first.raw!r} vs {last.raw!r}")
    if first.kind != last.kind:
        raise IncomparableKinds(f"{first.kind} vs {last.kind}")
    if is_equality_question(question):
        if first.kind == "date":
            equal = _dates_equal_shared(first, last)
        else:
            equal = first.number == last.number
        return ComparisonOutcome.EQUAL if equal else ComparisonOutcome.NOT_EQUAL
    polarity = question_polarity(question, polarity_table)
    order = compare_values(first, last)
    if order == 0:
        return ComparisonOutcome.EQUAL
    first_wins = (order < 0) == (polarity == "smaller_wins")
    return ComparisonOutcome.FIRST_MEETS if first_wins else ComparisonOutcome.LAST_MEETS


def resolve_final(
    outcome: ComparisonOutcome,
    subjects: tuple[str, str] | list[str],
    question: str = "",
) -> str:
    """Map an outcome back to an answer string."""
    if outcome is ComparisonOutcome.FIRST_MEETS:
        return subjects[0]
    if outcome is ComparisonOutcome.LAST_MEETS:
        return subjects[1]
    return "yes" if outcome is ComparisonOutcome.EQUAL else "no"

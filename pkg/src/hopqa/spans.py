"""Low-level span utilities: tokenization, date/number spans, entity heuristics.

Everything here operates on raw sentence text and returns character offsets
into that text, so callers can always recover the original surface form.
"""

from __future__ import annotations

import re
import unicodedata

Span = tuple[int, int]

MONTHS = (
    "January", "February", "March", "April", "May", "June",
    "July", "August", "September", "October", "November", "December",
)

MONTH_NUMBER = {name.casefold(): i + 1 for i, name in enumerate(MONTHS)}

_MONTH_RE = "|".join(MONTHS)

# "January 28, 1956" / "28 January 1956" / bare year.  Full forms first so
# finditer consumes them before the bare-year alternative can fire inside.
DATE_PATTERN = re.compile(
    rf"\b(?:(?:{_MONTH_RE})\s+\d{{1,2}},\s*\d{{3,4}}"
    rf"|\d{{1,2}}\s+(?:{_MONTH_RE})\s+\d{{3,4}}"
    rf"|[12]\d{{3}})\b",
    re.IGNORECASE,
)

NUMBER_PATTERN = re.compile(r"[-+]?\d{1,3}(?:,\d{3})+(?:\.\d+)?|[-+]?\d+(?:\.\d+)?")

_TOKEN_PATTERN = re.compile(r"\S+")

_EDGE_PUNCT = ".,;:!?()[]{}\"'«»“”‘’…–—-"

# Single capitalized tokens that never count as entities on their own.
_STOP_TOKENS = frozenset(
    t.casefold()
    for t in (
        "The", "A", "An", "And", "Or", "But", "In", "On", "At", "Of", "By",
        "To", "From", "For", "With", "After", "Before", "During", "Into",
        "He", "She", "It", "They", "We", "I", "You", "His", "Her", "Its",
        "Their", "Our", "My", "Your", "This", "That", "These", "Those",
        "Who", "What", "When", "Where", "Which", "Why", "How", "Whom",
        "Whose", "Is", "Was", "Are", "Were", "Do", "Does", "Did", "Has",
        "Have", "Had", "Be", "Been", "Will", "Would", "Can", "Could",
        "Both", "Not", "No", "Yes", "As", "If", "Then", "Than", "So",
        "La", "Le", "Les", "El", "Los", "Las", "De", "Der", "Die", "Das",
    )
) | frozenset(m.casefold() for m in MONTHS)


def fold(text: str) -> str:
    """Canonical comparison form: NFC-normalized and case-folded."""
    return unicodedata.normalize("NFC", text).casefold()


def collapse_ws(text: str) -> str:
    return " ".join(text.split())


def token_spans(text: str) -> list[Span]:
    """Character spans of whitespace-delimited tokens."""
    return [m.span() for m in _TOKEN_PATTERN.finditer(text)]


def date_spans(text: str) -> list[Span]:
    return [m.span() for m in DATE_PATTERN.finditer(text)]


def number_spans(text: str) -> list[Span]:
    return [m.span() for m in NUMBER_PATTERN.finditer(text)]


def _token_core(text: str, span: Span) -> Span | None:
    """Span of the token with edge punctuation removed; None if nothing left."""
    start, end = span
    while start < end and text[start] in _EDGE_PUNCT:
        start += 1
    while end > start and text[end - 1] in _EDGE_PUNCT:
        end -= 1
    if start >= end:
        return None
    return start, end


def strip_trailing_punct(text: str) -> str:
    """Drop trailing punctuation, keeping a ')' that closes an earlier '('."""
    while text:
        ch = text[-1]
        if ch not in ".,;:!?)\"'”’":
            break
        if ch == ")" and text.count("(") >= text.count(")"):
            break
        text = text[:-1]
    return text.rstrip()


def entity_spans(text: str) -> list[tuple[str, Span]]:
    """Heuristic entity mentions: maximal runs of capitalized tokens.

    Tokens containing digits and tokens inside date spans are excluded, so
    "born January 28, 1956" contributes no mention.  Single-token runs that
    are common function words or month names are dropped; multi-token runs
    keep a leading article ("The Woman Next Door").
    """
    excluded = date_spans(text)
    results: list[tuple[str, Span]] = []
    run: list[Span] = []

    def flush() -> None:
        if not run:
            return
        start, end = run[0][0], run[-1][1]
        if len(run) == 1:
            core = text[start:end]
            if core.casefold() in _STOP_TOKENS:
                run.clear()
                return
        mention = strip_trailing_punct(text[start:end])
        if mention:
            results.append((mention, (start, start + len(mention))))
        run.clear()

    for span in token_spans(text):
        core = _token_core(text, span)
        if core is None:
            flush()
            continue
        cs, ce = core
        word = text[cs:ce]
        in_date = any(cs < de and ds < ce for ds, de in excluded)
        if in_date or any(ch.isdigit() for ch in word) or not word[0].isupper():
            flush()
            continue
        run.append((cs, ce))
    flush()
    return results

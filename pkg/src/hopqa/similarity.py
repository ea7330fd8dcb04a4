"""Fuzzy string similarity built on longest-common-subsequence F1.

Comparisons run over NFC-normalized, case-folded text.  The default
granularity is character level; token granularity treats each whitespace
token as one unit.  `fuzzy_locate` slides token-aligned windows over a
haystack so matches always start and end on token boundaries.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .spans import fold, token_spans

GRANULARITIES = ("character", "token")


@dataclass(frozen=True)
class SimilarityConfig:
    """Thresholds used throughout screening and reading.

    sigma_entity gates entity/subject matches, sigma_relation gates relation
    cue matches.
    """

    sigma_entity: float = 0.8
    sigma_relation: float = 0.65
    granularity: str = "character"

    def __post_init__(self) -> None:
        for name in ("sigma_entity", "sigma_relation"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.granularity not in GRANULARITIES:
            raise ValueError(f"granularity must be one of {GRANULARITIES}")


@dataclass(frozen=True)
class Match:
    """A located window: [start, end) offsets into the raw haystack."""

    start: int
    end: int
    score: float


def _units(text: str, granularity: str):
    folded = fold(text)
    if granularity == "character":
        return folded
    return folded.split()


def _lcs_table_free(a, b) -> int:
    """Two-row dynamic program over sequences of hashable units."""
    if not a or not b:
        return 0
    # Trimming the common prefix/suffix is always safe for LCS length.
    i = 0
    while i < len(a) and i < len(b) and a[i] == b[i]:
        i += 1
    j = 0
    while j < len(a) - i and j < len(b) - i and a[-1 - j] == b[-1 - j]:
        j += 1
    trimmed = i + j
    a = a[i : len(a) - j]
    b = b[i : len(b) - j]
    if not a or not b:
        return trimmed
    if len(b) < len(a):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0]
        best = 0
        for k, y in enumerate(b, start=1):
            if x == y:
                best = prev[k - 1] + 1
            elif prev[k] > curr[-1]:
                best = prev[k]
            else:
                best = curr[-1]
            curr.append(best)
        prev = curr
    return trimmed + prev[-1]


def lcs_length(a: str, b: str, granularity: str = "character") -> int:
    """Length of the longest common subsequence of the normalized inputs."""
    if granularity not in GRANULARITIES:
        raise ValueError(f"granularity must be one of {GRANULARITIES}")
    return _lcs_table_free(_units(a, granularity), _units(b, granularity))


def _f1(lcs: int, len_a: int, len_b: int) -> float:
    if len_a == 0 or len_b == 0:
        return 0.0
    precision = lcs / len_a
    recall = lcs / len_b
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def lcs_f1(a: str, b: str, granularity: str = "character") -> float:
    """Harmonic mean of LCS coverage of each input; 0 when either is empty."""
    if granularity not in GRANULARITIES:
        raise ValueError(f"granularity must be one of {GRANULARITIES}")
    ua, ub = _units(a, granularity), _units(b, granularity)
    return _f1(_lcs_table_free(ua, ub), len(ua), len(ub))


def fuzzy_locate(
    needle: str,
    haystack: str,
    threshold: float,
    granularity: str = "character",
) -> Match | None:
    """Best token-aligned window scoring lcs_f1 >= threshold, else None.

    Candidate windows span whole tokens and their normalized length stays
    within +/-50% of the needle's.  Ties are broken by leftmost start, then
    by shortest window.
    """
    if granularity not in GRANULARITIES:
        raise ValueError(f"granularity must be one of {GRANULARITIES}")
    needle_units = _units(needle, granularity)
    nlen = len(needle_units)
    if nlen == 0 or not haystack.strip():
        return None
    needle_counts = Counter(needle_units)
    tokens = token_spans(haystack)
    best: Match | None = None
    for i in range(len(tokens)):
        for j in range(i, len(tokens)):
            window = haystack[tokens[i][0] : tokens[j][1]]
            wunits = _units(window, granularity)
            wlen = len(wunits)
            if 2 * wlen > 3 * nlen:
                break  # windows only grow with j
            if 2 * wlen < nlen:
                continue
            # Cheap multiset bound on the LCS prunes most windows.
            cap = sum(min(c, needle_counts[u]) for u, c in Counter(wunits).items())
            if _f1(cap, nlen, wlen) < threshold:
                continue
            score = _f1(_lcs_table_free(needle_units, wunits), nlen, wlen)
            if score < threshold:
                continue
            if best is None or score > best.score:
                best = Match(tokens[i][0], tokens[j][1], score)
    return best

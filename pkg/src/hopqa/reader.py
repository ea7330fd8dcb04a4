"""Lexical sub-question reader.

Given one (subject, relation) sub-question and a screened paragraph list,
finds the sentence that names the subject and carries evidence for the
relation, then lifts the answer span out of it: a date for temporal
relations, otherwise the best entity mention near the relation cue.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .config import PipelineConfig
from .decompose import ANSWER_PLACEHOLDER, TEMPORAL_RELATIONS, SubQuestion
from .relmatch import load_statement_patterns, relation_match, surface_forms
from .similarity import fuzzy_locate
from .spans import (
    collapse_ws,
    date_spans,
    entity_spans,
    fold,
    strip_trailing_punct,
    token_spans,
)


class NoAnswerError(Exception):
    """No screened sentence yields an extractable answer."""

    def __init__(self, sub_question: "SubQuestion | None" = None, detail: str = ""):
        self.sub_question = sub_question
        message = detail or "no answer found"
        if sub_question is not None:
            message = f"{message}: ({sub_question.subject!r}, {sub_question.relation!r})"
        super().__init__(message)


@dataclass(frozen=True)
class SubAnswer:
    """Answer to one sub-question with its provenance.

    source is (paragraph index in the ORIGINAL context, sentence index).
    """

    text: str
    score: float
    source: tuple[int, int]
    sub_question: SubQuestion


@dataclass(frozen=True)
class _Candidate:
    combined: float
    list_pos: int
    sentence_idx: int
    paragraph_index: int
    sentence: str
    subject_start: int
    subject_end: int
    relation_start: int
    relation_end: int


def _subject_hit(subject: str, sentence: str, config: PipelineConfig):
    return fuzzy_locate(
        subject, sentence, config.sigma_entity, granularity=config.granularity
    )


def _temporal_fallback(subject_end: int, sentence: str) -> bool:
    """A date span starting within 3 tokens after the subject mention.

    Lets biography-style openers ("Chano Urueta (February 24, 1904 - ...)")
    count as relation evidence even with no explicit cue word, while film
    blurbs with a leading year stay out (their dates precede the name).
    """
    tokens = [t for t in token_spans(sentence) if t[0] >= subject_end]
    dates = [d for d in date_spans(sentence) if d[0] >= subject_end]
    if not dates:
        return False
    first_date_start = dates[0][0]
    ahead = [t for t in tokens if t[0] < first_date_start]
    return len(ahead) <= 3


def _pick_date(cand: _Candidate) -> str | None:
    """Date span nearest the relation cue; lifespan rule when cueless.

    Birth-like temporal relations take the first date after the subject,
    death-like take the last, matching "(born - died)" sentence shapes.
    """
    spans = [d for d in date_spans(cand.sentence) if d[0] >= cand.subject_end]
    if not spans:
        spans = date_spans(cand.sentence)
    if not spans:
        return None
    if cand.relation_start >= 0:
        anchor = (cand.relation_start + cand.relation_end) / 2
        spans = sorted(spans, key=lambda d: (abs((d[0] + d[1]) / 2 - anchor), d[0]))
        return cand.sentence[spans[0][0]:spans[0][1]]
    return cand.sentence[spans[0][0]:spans[0][1]]


def _pick_lifespan_date(cand: _Candidate, which: str) -> str | None:
    spans = [d for d in date_spans(cand.sentence) if d[0] >= cand.subject_end]
    if not spans:
        return None
    span = spans[0] if which == "first" else spans[-1]
    return cand.sentence[span[0]:span[1]]


def _normalize_mention(text: str) -> str:
    return strip_trailing_punct(collapse_ws(fold(text)))


def _pick_entity(cand: _Candidate, subject: str, config: PipelineConfig) -> str | None:
    """Entity mention nearest after the relation cue, else nearest before.

    The mention overlapping the located subject is skipped (by position, not
    similarity: a sibling name such as "Ralph Earnhardt" for subject "Dale
    Earnhardt" sits above the threshold yet is exactly the answer we want),
    as is any other verbatim restatement of the subject.
    """
    mentions = entity_spans(cand.sentence)
    if not mentions:
        return None
    subject_key = _normalize_mention(subject)
    scored: list[tuple[int, int, str]] = []
    for text, (start, end) in mentions:
        if start < cand.subject_end and cand.subject_start < end:
            continue  # the located subject mention
        if _normalize_mention(text) == subject_key:
            continue
        scored.append((start, end, text))
    if not scored:
        return None
    if cand.relation_start >= 0:
        after = [s for s in scored if s[0] >= cand.relation_end]
        if after:
            return min(after, key=lambda s: s[0])[2]
        before = [s for s in scored if s[1] <= cand.relation_start]
        if before:
            return max(before, key=lambda s: s[1])[2]
    return scored[0][2]


def _noun_phrase_fallback(cand: _Candidate) -> str | None:
    """Last resort: the chunk right after the relation cue up to punctuation."""
    if cand.relation_start < 0:
        return None
    tail = cand.sentence[cand.relation_end:]
    for stop in (".", ",", ";", " and ", " which ", " who "):
        pos = tail.find(stop)
        if pos >= 0:
            tail = tail[:pos]
    text = strip_trailing_punct(tail.strip(" :-"))
    words = text.split()
    if words and fold(words[0]) in {"of", "the", "a", "an", "is", "was", "in", "by"}:
        words = words[1:]
    text = " ".join(words)
    return text or None


@dataclass
class LexicalReader:
    """Rule-based reader over screened paragraphs."""

    statement_patterns: dict = field(default_factory=load_statement_patterns)
    name: str = "lexical"

    def read(self, sub_question: SubQuestion, paragraphs, config: PipelineConfig) -> SubAnswer:
        if sub_question.subject == ANSWER_PLACEHOLDER:
            raise ValueError("sub-question subject still holds the answer placeholder")
        temporal = sub_question.relation in TEMPORAL_RELATIONS
        candidates: list[_Candidate] = []
        for list_pos, paragraph in enumerate(paragraphs):
            for sidx, sentence in enumerate(paragraph.sentences):
                subject_hit = _subject_hit(sub_question.subject, sentence, config)
                if subject_hit is None:
                    continue
                relation_hit = relation_match(
                    sub_question.relation,
                    sentence,
                    config.sigma_relation,
                    granularity=config.granularity,
                    patterns=self.statement_patterns,
                )
                if relation_hit is not None:
                    relation_score = relation_hit.score
                    rel_span = (relation_hit.start, relation_hit.end)
                elif temporal and _temporal_fallback(subject_hit.end, sentence):
                    relation_score = config.sigma_relation
                    rel_span = (-1, -1)
                else:
                    continue
                combined = (subject_hit.score + relation_score) / 2.0
                candidates.append(
                    _Candidate(
                        combined=combined,
                        list_pos=list_pos,
                        sentence_idx=sidx,
                        paragraph_index=paragraph.index,
                        sentence=sentence,
                        subject_start=subject_hit.start,
                        subject_end=subject_hit.end,
                        relation_start=rel_span[0],
                        relation_end=rel_span[1],
                    )
                )
        candidates.sort(key=lambda c: (-c.combined, c.list_pos, c.sentence_idx))
        for cand in candidates:
            text = self._extract(cand, sub_question, temporal, config)
            if text:
                return SubAnswer(
                    text=text,
                    score=cand.combined,
                    source=(cand.paragraph_index, cand.sentence_idx),
                    sub_question=sub_question,
                )
        raise NoAnswerError(sub_question)

    def _extract(
        self,
        cand: _Candidate,
        sub_question: SubQuestion,
        temporal: bool,
        config: PipelineConfig,
    ) -> str | None:
        if temporal:
            if cand.relation_start >= 0:
                text = _pick_date(cand)
            else:
                text = _pick_lifespan_date(cand, TEMPORAL_RELATIONS[sub_question.relation])
            if text:
                return strip_trailing_punct(text)
            return None
        text = _pick_entity(cand, sub_question.subject, config)
        if text:
            return text
        text = _noun_phrase_fallback(cand)
        return strip_trailing_punct(text) if text else None


def read(sub_question: SubQuestion, paragraphs, backend, config: PipelineConfig) -> SubAnswer:
    """Dispatch one sub-question to the configured reader backend."""
    return backend.read(sub_question, paragraphs, config)

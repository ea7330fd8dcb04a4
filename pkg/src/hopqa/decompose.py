"""Question decomposition: subjects, relation chain, question type.

The rule backend covers the four 2WikiMultiHopQA question shapes with a
cue table and a kinship-composite table.  Classifier-style backends return
per-type relation score rows that are fused against the type distribution
(`fuse_relation_scores`); that fusion lives here so every backend shares it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .corpus import QuestionType
from .relmatch import load_composites, load_cue_table
from .spans import entity_spans

ANSWER_PLACEHOLDER = "[ANS]"

N_TYPES = 4

# Order of rows in per-type score matrices and of type_probs entries.
TYPE_ORDER = (
    QuestionType.COMPOSITIONAL,
    QuestionType.INFERENCE,
    QuestionType.COMPARISON,
    QuestionType.BRIDGE_COMPARISON,
)

# Relations whose values are dates; used to tell the compared attribute from
# the bridge relation in comparison-family questions.
TEMPORAL_RELATIONS = {
    "date of birth": "first",
    "date of death": "last",
    "publication date": "first",
    "inception": "first",
}


class ExtractionFailed(Exception):
    """The extractor could not produce subjects and relations."""


class DimensionMismatch(ValueError):
    """Score matrix or distribution has the wrong shape."""


class ArityMismatch(ValueError):
    """Subject count does not fit the question type."""


@dataclass(frozen=True)
class RelationScores:
    """Per-type score rows over a shared relation vocabulary."""

    vocabulary: tuple[str, ...]
    per_type: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        if not self.vocabulary:
            raise DimensionMismatch("vocabulary is empty")
        if len(self.per_type) != N_TYPES:
            raise DimensionMismatch(f"expected {N_TYPES} score rows, got {len(self.per_type)}")
        for row in self.per_type:
            if len(row) != len(self.vocabulary):
                raise DimensionMismatch(
                    f"row width {len(row)} != vocabulary size {len(self.vocabulary)}"
                )


@dataclass(frozen=True)
class Decomposition:
    subjects: tuple[str, ...]
    relations: tuple[str, ...]
    qtype: QuestionType
    type_probs: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if not self.subjects:
            raise ValueError("decomposition has no subjects")
        if not self.relations:
            raise ValueError("decomposition has no relations")
        if self.type_probs is not None:
            if len(self.type_probs) != N_TYPES:
                raise DimensionMismatch(f"type_probs must have {N_TYPES} entries")
            if abs(sum(self.type_probs) - 1.0) > 1e-6:
                raise ValueError("type_probs must sum to 1")


@dataclass(frozen=True)
class SubQuestion:
    subject: str
    relation: str
    chain_id: int
    hop: int

    def __post_init__(self) -> None:
        if self.hop < 1:
            raise ValueError("hop numbering starts at 1")
        if self.hop == 1 and self.subject == ANSWER_PLACEHOLDER:
            raise ValueError(f"{ANSWER_PLACEHOLDER} cannot appear at hop 1")


def fuse_relation_scores(
    type_probs: list[float] | tuple[float, ...],
    scores: RelationScores,
    top_k: int,
) -> list[str]:
    """Mix per-type score rows by the type distribution; top-k labels.

    Ties are broken by vocabulary order.  With a one-hot distribution this
    reduces exactly to the selected row's own ranking.
    """
    if len(type_probs) != N_TYPES:
        raise DimensionMismatch(f"type_probs must have {N_TYPES} entries")
    if abs(sum(type_probs) - 1.0) > 1e-6:
        raise ValueError("type_probs must sum to 1")
    size = len(scores.vocabulary)
    if not 1 <= top_k <= size:
        raise DimensionMismatch(f"top_k {top_k} outside [1, {size}]")
    fused = [
        sum(type_probs[t] * scores.per_type[t][k] for t in range(N_TYPES))
        for k in range(size)
    ]
    ranked = sorted(range(size), key=lambda k: (-fused[k], k))
    return [scores.vocabulary[k] for k in ranked[:top_k]]


def one_hot(qtype: QuestionType) -> tuple[float, ...]:
    return tuple(1.0 if t is qtype else 0.0 for t in TYPE_ORDER)


@dataclass(frozen=True)
class _Cue:
    position: int
    text: str
    relation: str


def _scan_cues(text: str, cue_table: dict) -> list[_Cue]:
    """Longest-first, non-overlapping cue occurrences with positions."""
    claimed: list[tuple[int, int]] = []
    found: list[_Cue] = []
    for cue in sorted(cue_table, key=lambda c: (-len(c), c)):
        for match in re.finditer(rf"(?<!\w){re.escape(cue)}(?!\w)", text, re.IGNORECASE):
            span = match.span()
            if any(span[0] < e and s < span[1] for s, e in claimed):
                continue
            claimed.append(span)
            found.append(_Cue(span[0], cue, cue_table[cue]))
    return sorted(found, key=lambda c: c.position)


_COMPARISON_TAIL = re.compile(r",\s*([^,]+?)\s+or\s+(.+?)\s*[?.]*\s*$", re.IGNORECASE)
_POSSESSIVE = re.compile(r"(?:'s|’s)$")


def _clean_subject(text: str) -> str:
    text = text.strip().strip("\"'“”")
    text = re.sub(r"[?.!]+$", "", text).strip()
    return text


def _single_subject(question: str) -> str:
    mentions = entity_spans(question)
    if not mentions:
        raise ExtractionFailed("no subject mention found")
    # The anchor entity sits nearest the end of the question.
    text = mentions[-1][0]
    return _clean_subject(_POSSESSIVE.sub("", text))


@dataclass
class RuleBasedExtractor:
    """Pattern-and-table extractor for dataset-style questions."""

    cue_table: dict = field(default_factory=load_cue_table)
    composites: dict = field(default_factory=load_composites)

    def extract(self, question: str) -> Decomposition:
        question = question.strip()
        if not question:
            raise ExtractionFailed("empty question")

        tail = _COMPARISON_TAIL.search(question)
        if tail:
            return self._extract_comparison(question, tail)

        folded = question.casefold()
        for phrase in sorted(self.composites, key=lambda p: (-len(p), p)):
            if re.search(rf"(?<!\w){re.escape(phrase)}(?!\w)", folded):
                subject = self._subject_or_fail(question)
                return Decomposition(
                    subjects=(subject,),
                    relations=self.composites[phrase],
                    qtype=QuestionType.INFERENCE,
                    type_probs=one_hot(QuestionType.INFERENCE),
                )

        return self._extract_compositional(question)

    def _subject_or_fail(self, question: str) -> str:
        subject = _single_subject(question)
        if not subject:
            raise ExtractionFailed("empty subject mention")
        return subject

    def _extract_comparison(self, question: str, tail: re.Match) -> Decomposition:
        subjects = (_clean_subject(tail.group(1)), _clean_subject(tail.group(2)))
        if not subjects[0] or not subjects[1]:
            raise ExtractionFailed("empty comparison subject")
        lead = question[: tail.start()]
        cues = _scan_cues(lead, self.cue_table)
        compared = [c for c in cues if c.relation in TEMPORAL_RELATIONS]
        bridges = [c for c in cues if c.relation not in TEMPORAL_RELATIONS]
        if compared and bridges:
            relations = (bridges[0].relation, compared[0].relation)
            qtype = QuestionType.BRIDGE_COMPARISON
        elif compared:
            relations = (compared[0].relation,)
            qtype = QuestionType.COMPARISON
        elif bridges:
            relations = (bridges[0].relation,)
            qtype = QuestionType.COMPARISON
        else:
            raise ExtractionFailed("no relation cue in comparison question")
        return Decomposition(subjects, relations, qtype, one_hot(qtype))

    def _extract_compositional(self, question: str) -> Decomposition:
        cues = _scan_cues(question, self.cue_table)
        if not cues:
            raise ExtractionFailed("no relation cue found")
        subject = self._subject_or_fail(question)
        anchor = question.lower().rfind(subject.lower())
        if anchor < 0:
            anchor = len(question)
        cues = [self._adjust_wh(question, c) for c in cues]
        # Possessive cues after the subject bind first, left to right;
        # of-genitive cues before it bind outward, right to left.
        ordered = [c for c in cues if c.position > anchor] + [
            c for c in reversed(cues) if c.position <= anchor
        ]
        relations = tuple(c.relation for c in ordered)
        return Decomposition(
            subjects=(subject,),
            relations=relations,
            qtype=QuestionType.COMPOSITIONAL,
            type_probs=one_hot(QuestionType.COMPOSITIONAL),
        )

    @staticmethod
    def _adjust_wh(question: str, cue: _Cue) -> _Cue:
        # "Where ... born" asks for a place even though "born" alone would
        # read as a date cue.
        if cue.relation == "date of birth" and question.casefold().startswith("where"):
            return _Cue(cue.position, cue.text, "place of birth")
        if cue.relation == "date of death" and question.casefold().startswith("where"):
            return _Cue(cue.position, cue.text, "place of death")
        return cue


def extract(question: str, backend: RuleBasedExtractor | object) -> Decomposition:
    """Run the configured extractor backend on a raw question."""
    return backend.extract(question)


def compose_sub_questions(decomposition: Decomposition) -> list[SubQuestion]:
    """Expand a decomposition into ordered, chain-grouped sub-questions."""
    qtype = decomposition.qtype
    subjects = decomposition.subjects
    relations = decomposition.relations
    sub_questions: list[SubQuestion] = []
    if qtype is QuestionType.COMPARISON:
        if len(subjects) < 2:
            raise ArityMismatch("comparison questions need two subjects")
        for chain_id, subject in enumerate(subjects):
            sub_questions.append(SubQuestion(subject, relations[0], chain_id, 1))
    elif qtype is QuestionType.BRIDGE_COMPARISON:
        if len(subjects) < 2:
            raise ArityMismatch("bridge comparison questions need two subjects")
        for chain_id, subject in enumerate(subjects):
            for hop, relation in enumerate(relations, start=1):
                head = subject if hop == 1 else ANSWER_PLACEHOLDER
                sub_questions.append(SubQuestion(head, relation, chain_id, hop))
    else:
        if len(subjects) != 1:
            raise ArityMismatch(f"{qtype.value} questions take one subject")
        for hop, relation in enumerate(relations, start=1):
            head = subjects[0] if hop == 1 else ANSWER_PLACEHOLDER
            sub_questions.append(SubQuestion(head, relation, 0, hop))
    sub_questions.sort(key=lambda sq: (sq.chain_id, sq.hop))
    return sub_questions

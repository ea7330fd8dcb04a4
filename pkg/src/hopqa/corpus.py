"""Dataset model and loader for 2WikiMultiHopQA-format JSON splits.

A split is a JSON array of records with `_id`, `question`, `type`,
`context` (list of [title, [sentence, ...]]), `answer`, `supporting_facts`
(list of [title, sentence-index]) and `evidences` (list of
[subject, relation, object] triples).
"""

from __future__ import annotations

import enum
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

logger = logging.getLogger(__name__)


class SchemaError(ValueError):
    """A record does not have the expected shape."""

    def __init__(self, record_id: str, fieldname: str, message: str):
        super().__init__(f"record {record_id!r}, field {fieldname!r}: {message}")
        self.record_id = record_id
        self.fieldname = fieldname


class InvariantViolation(ValueError):
    """A structurally valid record breaks a dataset invariant."""

    def __init__(self, record_id: str, message: str):
        super().__init__(f"record {record_id!r}: {message}")
        self.record_id = record_id


class QuestionType(enum.Enum):
    COMPOSITIONAL = "compositional"
    INFERENCE = "inference"
    COMPARISON = "comparison"
    BRIDGE_COMPARISON = "bridge_comparison"

    @classmethod
    def parse(cls, raw: str) -> "QuestionType":
        key = raw.strip().casefold().replace("-", "_").replace(" ", "_")
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown question type {raw!r}")

    def serialize(self) -> str:
        return self.value

    @property
    def is_comparison_family(self) -> bool:
        return self in (QuestionType.COMPARISON, QuestionType.BRIDGE_COMPARISON)


@dataclass(frozen=True)
class Paragraph:
    title: str
    sentences: tuple[str, ...]
    index: int  # position within the example's context


@dataclass(frozen=True)
class EvidenceTriple:
    subject: str
    relation: str
    object: str

    def __post_init__(self) -> None:
        for name in ("subject", "relation", "object"):
            if not getattr(self, name).strip():
                raise ValueError(f"evidence triple has empty {name}")

    def as_list(self) -> list[str]:
        return [self.subject, self.relation, self.object]


@dataclass(frozen=True)
class Example:
    id: str
    question: str
    qtype: QuestionType
    context: tuple[Paragraph, ...]
    gold_answer: str
    supporting_facts: frozenset[tuple[str, int]] = frozenset()
    gold_evidence: tuple[EvidenceTriple, ...] = ()

    def titles(self) -> list[str]:
        return [p.title for p in self.context]


def _parse_record(raw: object) -> Example:
    if not isinstance(raw, dict):
        raise SchemaError("?", "record", "not a JSON object")
    rid = raw.get("_id")
    if not isinstance(rid, str) or not rid:
        raise SchemaError(str(rid), "_id", "missing or not a string")

    def need(name: str, kind: type) -> object:
        value = raw.get(name)
        if not isinstance(value, kind):
            raise SchemaError(rid, name, f"missing or not {kind.__name__}")
        return value

    question = need("question", str)
    qtype = QuestionType.parse(need("type", str))

    context_raw = need("context", list)
    paragraphs = []
    for idx, entry in enumerate(context_raw):
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not isinstance(entry[0], str)
            or not isinstance(entry[1], list)
            or not all(isinstance(s, str) for s in entry[1])
        ):
            raise SchemaError(rid, "context", f"paragraph {idx} malformed")
        if not entry[1]:
            raise SchemaError(rid, "context", f"paragraph {idx} has no sentences")
        paragraphs.append(Paragraph(entry[0], tuple(entry[1]), idx))
    context = tuple(paragraphs)

    answer = raw.get("answer", "")
    if not isinstance(answer, str):
        raise SchemaError(rid, "answer", "not a string")

    sp_raw = raw.get("supporting_facts", [])
    if not isinstance(sp_raw, list):
        raise SchemaError(rid, "supporting_facts", "not a list")
    titles = {p.title: p for p in context}
    facts = set()
    for entry in sp_raw:
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not isinstance(entry[0], str)
            or not isinstance(entry[1], int)
        ):
            raise SchemaError(rid, "supporting_facts", f"malformed entry {entry!r}")
        title, sidx = entry
        if title not in titles:
            raise InvariantViolation(rid, f"supporting fact title {title!r} not in context")
        limit = max(len(p.sentences) for p in context if p.title == title)
        if not 0 <= sidx < limit:
            raise InvariantViolation(rid, f"supporting fact index {sidx} out of range for {title!r}")
        facts.add((title, sidx))

    ev_raw = raw.get("evidences", [])
    if not isinstance(ev_raw, list):
        raise SchemaError(rid, "evidences", "not a list")
    triples = []
    for entry in ev_raw:
        if not isinstance(entry, list) or len(entry) != 3 or not all(isinstance(x, str) for x in entry):
            raise SchemaError(rid, "evidences", f"malformed entry {entry!r}")
        try:
            triples.append(EvidenceTriple(*entry))
        except ValueError as exc:
            raise InvariantViolation(rid, str(exc)) from exc

    return Example(
        id=rid,
        question=question,
        qtype=qtype,
        context=context,
        gold_answer=answer,
        supporting_facts=frozenset(facts),
        gold_evidence=tuple(triples),
    )


def load_split(path: str | Path, strict: bool = False) -> list[Example]:
    """Load a split; in lenient mode invalid records are skipped and logged."""
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, list):
        raise SchemaError("?", "split", "top level is not a JSON array")
    examples: list[Example] = []
    seen: set[str] = set()
    skipped = 0
    for raw in data:
        try:
            example = _parse_record(raw)
            if example.id in seen:
                raise InvariantViolation(example.id, "duplicate id within split")
        except (SchemaError, InvariantViolation, ValueError):
            if strict:
                raise
            skipped += 1
            continue
        seen.add(example.id)
        examples.append(example)
    if skipped:
        logger.warning("load_split: skipped %d invalid record(s) from %s", skipped, path)
    return examples


def example_to_record(example: Example) -> dict:
    return {
        "_id": example.id,
        "question": example.question,
        "type": example.qtype.serialize(),
        "context": [[p.title, list(p.sentences)] for p in example.context],
        "answer": example.gold_answer,
        "supporting_facts": [list(f) for f in sorted(example.supporting_facts)],
        "evidences": [t.as_list() for t in example.gold_evidence],
    }


def dump_split(examples: list[Example], path: str | Path) -> None:
    records = [example_to_record(e) for e in examples]
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(records, handle, ensure_ascii=False, indent=1)
        handle.write("\n")


@dataclass
class SentenceIndex:
    """Flat sentence table with (title, sentence-index) lookup per example."""

    entries: list[tuple[str, int, int, str]] = field(default_factory=list)
    _by_title: dict[tuple[str, str, int], tuple[str, int, int, str]] = field(default_factory=dict)

    def add(self, example: Example) -> None:
        for paragraph in example.context:
            for sidx, sentence in enumerate(paragraph.sentences):
                entry = (example.id, paragraph.index, sidx, sentence)
                self.entries.append(entry)
                # First paragraph wins when titles repeat within an example.
                self._by_title.setdefault((example.id, paragraph.title, sidx), entry)

    def lookup(self, example_id: str, title: str, sidx: int) -> tuple[str, int, int, str] | None:
        return self._by_title.get((example_id, title, sidx))

    def __len__(self) -> int:
        return len(self.entries)


def index_sentences(examples: list[Example]) -> SentenceIndex:
    index = SentenceIndex()
    for example in examples:
        index.add(example)
    return index

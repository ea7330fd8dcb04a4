"""HTTP wire protocol client and remote stage backends.

Every remote stage speaks the same endpoint: POST {endpoint}/v1/infer with
a JSON body {"task": ..., "payload": {...}}.  Tasks:

  extract  -> classifier shape {"type_probs": [4], "subjects": [...],
              "relation_scores": {"vocabulary": [...], "per_type": [[...] x4]}}
              or span shape {"type_probs": [4], "subjects": [...],
              "relation_spans": [...]}
  read     -> {"answer": str, "score": float, "source": [p, s]}
  compare  -> {"state": 0|1|2|3}

Transport failures and non-200 statuses raise RemoteError.
"""

from __future__ import annotations

from dataclasses import dataclass

import requests

from .comparator import ComparisonOutcome
from .config import PipelineConfig
from .decompose import (
    N_TYPES,
    TYPE_ORDER,
    Decomposition,
    RelationScores,
    SubQuestion,
    fuse_relation_scores,
)
from .corpus import QuestionType
from .reader import NoAnswerError, SubAnswer


class RemoteError(Exception):
    """Remote inference failed: transport error, bad status, or bad shape."""


@dataclass
class WireClient:
    endpoint: str
    timeout: float = 10.0

    def infer(self, task: str, payload: dict) -> dict:
        url = self.endpoint.rstrip("/") + "/v1/infer"
        try:
            response = requests.post(
                url, json={"task": task, "payload": payload}, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise RemoteError(f"transport failure calling {url}: {exc}") from exc
        if response.status_code != 200:
            raise RemoteError(
                f"{url} returned {response.status_code}: {response.text[:200]}"
            )
        try:
            body = response.json()
        except ValueError as exc:
            raise RemoteError(f"{url} returned non-JSON body") from exc
        if not isinstance(body, dict):
            raise RemoteError(f"{url} returned a non-object body")
        return body


def _require(body: dict, key: str, kind) -> object:
    if key not in body:
        raise RemoteError(f"response missing {key!r}")
    value = body[key]
    if not isinstance(value, kind):
        raise RemoteError(f"response field {key!r} has wrong type")
    return value


def _type_from_probs(type_probs) -> QuestionType:
    best = max(range(len(type_probs)), key=lambda i: (type_probs[i], -i))
    return TYPE_ORDER[best]


def _top_k_for(qtype: QuestionType) -> int:
    if qtype is QuestionType.COMPARISON:
        return 1
    return 2


@dataclass
class RemoteClassifierExtractor:
    """Extractor backed by the remote relation classifier ("remote-cre")."""

    client: WireClient
    name: str = "remote-cre"

    def extract(self, question: str) -> Decomposition:
        body = self.client.infer("extract", {"question": question})
        type_probs = tuple(float(x) for x in _require(body, "type_probs", list))
        subjects = tuple(str(s) for s in _require(body, "subjects", list))
        scores_raw = _require(body, "relation_scores", dict)
        vocabulary = tuple(str(v) for v in _require(scores_raw, "vocabulary", list))
        per_type_raw = _require(scores_raw, "per_type", list)
        if len(type_probs) != N_TYPES:
            raise RemoteError(f"type_probs must have {N_TYPES} entries")
        try:
            scores = RelationScores(
                vocabulary=vocabulary,
                per_type=tuple(tuple(float(x) for x in row) for row in per_type_raw),
            )
        except ValueError as exc:
            raise RemoteError(f"bad relation_scores: {exc}") from exc
        qtype = _type_from_probs(type_probs)
        relations = fuse_relation_scores(type_probs, scores, top_k=_top_k_for(qtype))
        if not subjects:
            raise RemoteError("remote extractor returned no subjects")
        return Decomposition(
            qtype=qtype,
            subjects=subjects,
            relations=tuple(relations),
            type_probs=type_probs,
        )


@dataclass
class RemoteSpanExtractor:
    """Extractor backed by the remote span tagger ("remote-sre")."""

    client: WireClient
    name: str = "remote-sre"

    def extract(self, question: str) -> Decomposition:
        body = self.client.infer("extract", {"question": question, "mode": "span"})
        type_probs = tuple(float(x) for x in _require(body, "type_probs", list))
        subjects = tuple(str(s) for s in _require(body, "subjects", list))
        spans = tuple(str(r) for r in _require(body, "relation_spans", list))
        if len(type_probs) != N_TYPES:
            raise RemoteError(f"type_probs must have {N_TYPES} entries")
        if not subjects:
            raise RemoteError("remote extractor returned no subjects")
        if not spans:
            raise RemoteError("remote extractor returned no relation spans")
        return Decomposition(
            qtype=_type_from_probs(type_probs),
            subjects=subjects,
            relations=spans,
            type_probs=type_probs,
        )


@dataclass
class RemoteReader:
    client: WireClient
    name: str = "remote"

    def read(self, sub_question: SubQuestion, paragraphs, config: PipelineConfig) -> SubAnswer:
        payload = {
            "subject": sub_question.subject,
            "relation": sub_question.relation,
            "paragraphs": [
                {"title": p.title, "sentences": list(p.sentences)} for p in paragraphs
            ],
        }
        body = self.client.infer("read", payload)
        answer = str(_require(body, "answer", str))
        if not answer:
            raise NoAnswerError(sub_question, "remote reader returned empty answer")
        score = float(_require(body, "score", (int, float)))
        source_raw = _require(body, "source", list)
        if len(source_raw) != 2:
            raise RemoteError("read source must be [paragraph, sentence]")
        list_pos, sidx = int(source_raw[0]), int(source_raw[1])
        if not (0 <= list_pos < len(paragraphs)):
            raise RemoteError(f"read source paragraph {list_pos} out of range")
        paragraph = paragraphs[list_pos]
        if not (0 <= sidx < len(paragraph.sentences)):
            raise RemoteError(f"read source sentence {sidx} out of range")
        return SubAnswer(
            text=answer,
            score=score,
            source=(paragraph.index, sidx),
            sub_question=sub_question,
        )


@dataclass
class RemoteComparator:
    client: WireClient
    name: str = "remote"

    def compare(self, question: str, first_raw: str, last_raw: str) -> ComparisonOutcome:
        body = self.client.infer(
            "compare",
            {"question": question, "first": first_raw, "last": last_raw},
        )
        state = _require(body, "state", int)
        if isinstance(state, bool) or state not in (0, 1, 2, 3):
            raise RemoteError(f"compare state out of range: {state!r}")
        return ComparisonOutcome(state)

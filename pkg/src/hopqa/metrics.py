"""Scoring: answer EM/F1, supporting facts, evidence triples, joint metrics.

Answers are normalized (lowercase, punctuation and hyphens to spaces,
article tokens dropped, whitespace collapsed) before comparison.  Evidence
triples are normalized per slot on both sides; supporting facts compare
exactly.  Joint metrics multiply the three axes' em/precision/recall and
take the harmonic mean for F1.  Aggregates are unweighted means with a
per-question-type breakdown.
"""

from __future__ import annotations

import json
import string
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

from .corpus import Example

_PUNCT = set(string.punctuation)
_ARTICLES = ("a", "an", "the")
AXES = ("answer", "sp", "evidence", "joint")


class Scores4(NamedTuple):
    em: float
    f1: float
    precision: float
    recall: float


class MissingPredictions(Exception):
    """Gold ids absent from the prediction file."""

    def __init__(self, ids):
        self.ids = tuple(ids)
        shown = ", ".join(self.ids[:5])
        more = f" (+{len(self.ids) - 5} more)" if len(self.ids) > 5 else ""
        super().__init__(f"missing predictions for: {shown}{more}")


def normalize_answer(text: str) -> str:
    text = text.lower()
    text = "".join(" " if ch in _PUNCT else ch for ch in text)
    tokens = [t for t in text.split() if t not in _ARTICLES]
    return " ".join(tokens)


def answer_scores(pred: str, gold: str) -> Scores4:
    pred_norm, gold_norm = normalize_answer(pred), normalize_answer(gold)
    em = 1.0 if pred_norm == gold_norm else 0.0
    pred_tokens, gold_tokens = pred_norm.split(), gold_norm.split()
    if not pred_tokens and not gold_tokens:
        return Scores4(1.0, 1.0, 1.0, 1.0)
    if not pred_tokens or not gold_tokens:
        return Scores4(em, 0.0, 0.0, 0.0)
    overlap = sum((Counter(pred_tokens) & Counter(gold_tokens)).values())
    if overlap == 0:
        return Scores4(em, 0.0, 0.0, 0.0)
    precision = overlap / len(pred_tokens)
    recall = overlap / len(gold_tokens)
    f1 = 2 * precision * recall / (precision + recall)
    return Scores4(em, f1, precision, recall)


def set_scores(pred, gold) -> Scores4:
    pred, gold = set(pred), set(gold)
    em = 1.0 if pred == gold else 0.0
    if not pred and not gold:
        return Scores4(1.0, 1.0, 1.0, 1.0)
    overlap = len(pred & gold)
    precision = overlap / len(pred) if pred else 0.0
    recall = overlap / len(gold) if gold else 0.0
    f1 = (
        2 * precision * recall / (precision + recall)
        if precision + recall > 0
        else 0.0
    )
    return Scores4(em, f1, precision, recall)


def joint_scores(ans: Scores4, sp: Scores4, ev: Scores4) -> Scores4:
    em = ans.em * sp.em * ev.em
    precision = ans.precision * sp.precision * ev.precision
    recall = ans.recall * sp.recall * ev.recall
    f1 = (
        2 * precision * recall / (precision + recall)
        if precision + recall > 0
        else 0.0
    )
    return Scores4(em, f1, precision, recall)


def _normalize_triple(triple) -> tuple[str, str, str]:
    subject, relation, obj = triple
    return (
        normalize_answer(subject),
        normalize_answer(relation),
        normalize_answer(obj),
    )


def score_question(example: Example, answer: str, sp, evidence) -> dict[str, Scores4]:
    """All four axes for one question against its gold example."""
    ans = answer_scores(answer, example.gold_answer)
    sp_pairs = {(title, int(idx)) for title, idx in sp}
    sp_score = set_scores(sp_pairs, example.supporting_facts)
    pred_triples = {_normalize_triple(t) for t in evidence}
    gold_triples = {_normalize_triple(t.as_list()) for t in example.gold_evidence}
    ev_score = set_scores(pred_triples, gold_triples)
    return {
        "answer": ans,
        "sp": sp_score,
        "evidence": ev_score,
        "joint": joint_scores(ans, sp_score, ev_score),
    }


def _mean(rows: list[Scores4]) -> Scores4:
    if not rows:
        return Scores4(0.0, 0.0, 0.0, 0.0)
    n = len(rows)
    return Scores4(
        sum(r.em for r in rows) / n,
        sum(r.f1 for r in rows) / n,
        sum(r.precision for r in rows) / n,
        sum(r.recall for r in rows) / n,
    )


@dataclass
class ScoreReport:
    n: int
    overall: dict[str, Scores4]
    per_type: dict[str, dict] = field(default_factory=dict)
    missing: tuple[str, ...] = ()

    def to_json(self) -> str:
        def scores_dict(s: Scores4) -> dict:
            return {"em": s.em, "f1": s.f1, "precision": s.precision, "recall": s.recall}

        body = {
            "n": self.n,
            "metrics": {axis: scores_dict(self.overall[axis]) for axis in AXES},
            "per_type": {
                qtype: {
                    "n": block["n"],
                    **{axis: scores_dict(block[axis]) for axis in AXES},
                }
                for qtype, block in self.per_type.items()
            },
        }
        if self.missing:
            body["missing"] = list(self.missing)
        return json.dumps(body, indent=2, sort_keys=True, ensure_ascii=False)

    def format_table(self) -> str:
        lines = [f"n = {self.n}"]
        header = f"{'':<16}{'em':>8}{'f1':>8}{'prec':>8}{'rec':>8}"
        lines.append(header)
        for axis in AXES:
            s = self.overall[axis]
            lines.append(
                f"{axis:<16}{s.em:>8.4f}{s.f1:>8.4f}{s.precision:>8.4f}{s.recall:>8.4f}"
            )
        for qtype in sorted(self.per_type):
            block = self.per_type[qtype]
            lines.append("")
            lines.append(f"[{qtype}] n = {block['n']}")
            lines.append(header)
            for axis in AXES:
                s = block[axis]
                lines.append(
                    f"{axis:<16}{s.em:>8.4f}{s.f1:>8.4f}{s.precision:>8.4f}{s.recall:>8.4f}"
                )
        if self.missing:
            lines.append("")
            lines.append(f"missing predictions: {len(self.missing)}")
        return "\n".join(lines)


def score_predictions(
    examples, submission: dict, allow_partial: bool = False
) -> ScoreReport:
    """Score a submission dict {"answer", "sp", "evidence"} against gold."""
    answers = submission.get("answer", {})
    sp_map = submission.get("sp", {})
    ev_map = submission.get("evidence", {})
    missing = [ex.id for ex in examples if ex.id not in answers]
    if missing and not allow_partial:
        raise MissingPredictions(missing)
    per_question: list[tuple[str, dict[str, Scores4]]] = []
    for example in examples:
        if example.id not in answers:
            continue
        scores = score_question(
            example,
            answers[example.id],
            sp_map.get(example.id, []),
            ev_map.get(example.id, []),
        )
        per_question.append((example.qtype.serialize(), scores))
    overall = {
        axis: _mean([scores[axis] for _, scores in per_question]) for axis in AXES
    }
    per_type: dict[str, dict] = {}
    for qtype in sorted({qt for qt, _ in per_question}):
        rows = [scores for qt, scores in per_question if qt == qtype]
        per_type[qtype] = {"n": len(rows)}
        for axis in AXES:
            per_type[qtype][axis] = _mean([r[axis] for r in rows])
    return ScoreReport(
        n=len(per_question),
        overall=overall,
        per_type=per_type,
        missing=tuple(missing),
    )

"""End-to-end question answering: decompose, screen, read, compare.

run_question never raises on data: failed extraction degrades to a lexical
fallback answer, a chain that loses its thread truncates and keeps its last
answer, and a comparison that cannot be decided yields the first chain's
answer with a note.  Every emitted supporting fact and evidence triple
derives from an executed hop, so the trace explains the answer.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import comparator as comp
from .comparator import ComparisonOutcome
from .config import PipelineConfig
from .corpus import Example, EvidenceTriple, Paragraph, QuestionType
from .decompose import (
    ANSWER_PLACEHOLDER,
    ArityMismatch,
    Decomposition,
    DimensionMismatch,
    ExtractionFailed,
    RuleBasedExtractor,
    SubQuestion,
    compose_sub_questions,
)
from .reader import LexicalReader, NoAnswerError
from .relmatch import (
    load_composites,
    load_cue_table,
    load_statement_patterns,
)
from .remote import (
    RemoteClassifierExtractor,
    RemoteComparator,
    RemoteError,
    RemoteReader,
    RemoteSpanExtractor,
    WireClient,
)
from .screening import (
    AnnotatedEntities,
    EmptyTreeError,
    HeuristicEntities,
    LexicalRankScreener,
    PassthroughScreener,
    TreeScreener,
    build_entity_tree,
    load_entity_annotations,
)
from .similarity import SimilarityConfig
from .spans import entity_spans


@dataclass
class HopTrace:
    """One executed (or attempted) hop."""

    chain_id: int
    hop: int
    sub_question: SubQuestion
    sub_answer: object | None = None
    screened: tuple[int, ...] = ()
    error: str | None = None

    def record(self) -> dict:
        entry = {
            "chain": self.chain_id,
            "hop": self.hop,
            "subject": self.sub_question.subject,
            "relation": self.sub_question.relation,
            "screened": list(self.screened),
        }
        if self.sub_answer is not None:
            entry["answer"] = self.sub_answer.text
            entry["score"] = self.sub_answer.score
            entry["source"] = list(self.sub_answer.source)
        if self.error:
            entry["error"] = self.error
        return entry


@dataclass
class PredictionRecord:
    id: str
    answer: str
    supporting_facts: frozenset
    evidence: tuple
    per_hop_trace: tuple = ()
    comparison: ComparisonOutcome | None = None
    notes: tuple = ()
    debug: dict | None = None

    def record(self) -> dict:
        entry = {
            "id": self.id,
            "answer": self.answer,
            "sp": sorted([t, i] for t, i in self.supporting_facts),
            "evidence": [triple.as_list() for triple in self.evidence],
            "trace": [hop.record() for hop in self.per_hop_trace],
        }
        if self.comparison is not None:
            entry["comparison"] = int(self.comparison)
        if self.notes:
            entry["notes"] = list(self.notes)
        if self.debug is not None:
            entry["debug"] = self.debug
        return entry


class PipelineRuntime:
    """Configured backends plus shared lookup tables."""

    def __init__(self, config: PipelineConfig):
        config.validate()
        self.config = config
        self.similarity = SimilarityConfig(
            sigma_entity=config.sigma_entity,
            sigma_relation=config.sigma_relation,
            granularity=config.granularity,
        )
        self.statement_patterns = load_statement_patterns(config.statement_patterns_path)
        self.polarity_table = comp.load_polarity_table(config.polarity_table_path)
        client = None
        if config.remote_endpoint:
            client = WireClient(config.remote_endpoint, timeout=config.remote_timeout)
        if config.extractor_backend == "rule":
            self.extractor = RuleBasedExtractor(
                cue_table=load_cue_table(config.cue_table_path),
                composites=load_composites(),
            )
        elif config.extractor_backend == "remote-cre":
            self.extractor = RemoteClassifierExtractor(client)
        else:
            self.extractor = RemoteSpanExtractor(client)
        if config.reader_backend == "lexical":
            self.reader = LexicalReader(statement_patterns=self.statement_patterns)
        else:
            self.reader = RemoteReader(client)
        self.remote_comparator = (
            RemoteComparator(client) if config.comparator_backend == "remote" else None
        )
        self.annotations = {}
        if config.entity_annotations_path:
            self.annotations = load_entity_annotations(config.entity_annotations_path)

    @classmethod
    def from_config(cls, config: PipelineConfig) -> "PipelineRuntime":
        return cls(config)

    # -- screening ---------------------------------------------------------

    def _screener(self, example: Example, decomposition: Decomposition):
        budget = self.config.context_budget_tokens
        if self.config.screening == "none":
            return PassthroughScreener(budget)
        if self.config.screening == "lexical-rank":
            return LexicalRankScreener(budget, self.config.granularity)
        per_example = self.annotations.get(example.id)
        provider = AnnotatedEntities(per_example) if per_example else HeuristicEntities()
        tree = build_entity_tree(
            decomposition.subjects,
            decomposition.relations,
            example.context,
            config=self.similarity,
            entity_provider=provider,
            statement_patterns=self.statement_patterns,
        )
        return TreeScreener(tree, budget)

    # -- main entry points -------------------------------------------------

    def run_question(self, example: Example) -> PredictionRecord:
        notes: list[str] = []
        try:
            decomposition = self.extractor.extract(example.question)
            sub_questions = compose_sub_questions(decomposition)
        except (ExtractionFailed, ArityMismatch, DimensionMismatch, RemoteError) as exc:
            notes.append(f"extraction failed: {exc}")
            return self._fallback_record(example, notes)
        try:
            screener = self._screener(example, decomposition)
        except EmptyTreeError as exc:
            notes.append(f"screening degraded: {exc}")
            screener = PassthroughScreener(self.config.context_budget_tokens)

        by_index = {p.index: p for p in example.context}
        chains: dict[int, list[SubQuestion]] = {}
        for sq in sub_questions:
            chains.setdefault(sq.chain_id, []).append(sq)

        traces: list[HopTrace] = []
        chain_finals: dict[int, object] = {}
        for chain_id in sorted(chains):
            answers = []
            for sq in chains[chain_id]:
                subject = sq.subject
                if subject == ANSWER_PLACEHOLDER:
                    if not answers:
                        notes.append(f"chain {chain_id} truncated before hop {sq.hop}")
                        break
                    subject = answers[-1].text
                resolved = SubQuestion(subject, sq.relation, sq.chain_id, sq.hop)
                trace = HopTrace(chain_id, sq.hop, resolved)
                try:
                    screened = screener.screen(sq.hop, resolved, example.context)
                except EmptyTreeError as exc:
                    screened = [p.index for p in example.context]
                    trace.error = f"screening degraded: {exc}"
                trace.screened = tuple(screened)
                paragraphs = [by_index[i] for i in screened]
                try:
                    sub_answer = self.reader.read(resolved, paragraphs, self.config)
                except (NoAnswerError, RemoteError) as exc:
                    trace.error = f"no answer: {exc}"
                    traces.append(trace)
                    notes.append(f"chain {chain_id} truncated at hop {sq.hop}")
                    break
                trace.sub_answer = sub_answer
                traces.append(trace)
                answers.append(sub_answer)
            if answers:
                chain_finals[chain_id] = answers[-1]

        evidence = [
            EvidenceTriple(
                t.sub_question.subject, t.sub_question.relation, t.sub_answer.text
            )
            for t in traces
            if t.sub_answer is not None
        ]
        supporting = frozenset(
            (by_index[t.sub_answer.source[0]].title, t.sub_answer.source[1])
            for t in traces
            if t.sub_answer is not None
        )

        comparison: ComparisonOutcome | None = None
        if decomposition.qtype.is_comparison_family:
            answer, comparison, extra = self._resolve_comparison(
                example, decomposition, chain_finals, notes
            )
            if extra is not None:
                evidence.append(extra)
        else:
            final = chain_finals.get(0)
            answer = final.text if final is not None else None
        if answer is None:
            notes.append("no chain produced an answer; lexical fallback used")
            fallback = self._fallback_record(example, notes)
            return PredictionRecord(
                id=example.id,
                answer=fallback.answer,
                supporting_facts=fallback.supporting_facts,
                evidence=tuple(evidence),
                per_hop_trace=tuple(traces),
                comparison=comparison,
                notes=tuple(notes),
                debug=self._debug(decomposition),
            )
        return PredictionRecord(
            id=example.id,
            answer=answer,
            supporting_facts=supporting,
            evidence=tuple(evidence),
            per_hop_trace=tuple(traces),
            comparison=comparison,
            notes=tuple(notes),
            debug=self._debug(decomposition),
        )

    def _resolve_comparison(
        self,
        example: Example,
        decomposition: Decomposition,
        chain_finals: dict,
        notes: list[str],
    ):
        """(answer | None, outcome | None, synthetic evidence | None)."""
        subjects = decomposition.subjects[:2]
        first = chain_finals.get(0)
        last = chain_finals.get(max(chain_finals) if chain_finals else 1)
        if first is None or last is None or len(chain_finals) < 2:
            available = next(iter(chain_finals.values()), None)
            if available is not None:
                notes.append("comparison skipped: a chain produced no value")
                return available.text, None, None
            return None, None, None
        question = example.question
        if self.remote_comparator is not None:
            try:
                outcome = self.remote_comparator.compare(question, first.text, last.text)
            except RemoteError as exc:
                notes.append(f"comparison degraded: {exc}")
                return first.text, None, None
            phrase = self._order_phrase(outcome, first.text, last.text, question)
            triple = EvidenceTriple(first.text, phrase, last.text)
            return comp.resolve_final(outcome, subjects, question), outcome, triple
        first_value = comp.parse_value(first.text)
        last_value = comp.parse_value(last.text)
        if not (first_value.is_parsed and last_value.is_parsed):
            if comp.is_equality_question(question):
                equal = first.text.strip().casefold() == last.text.strip().casefold()
                outcome = (
                    ComparisonOutcome.EQUAL if equal else ComparisonOutcome.NOT_EQUAL
                )
                phrase = "equal" if equal else "not equal"
                triple = EvidenceTriple(first.text, phrase, last.text)
                return comp.resolve_final(outcome, subjects, question), outcome, triple
            notes.append("low confidence: comparison value did not parse")
            return first.text, None, None
        try:
            outcome = comp.compare(question, first_value, last_value, self.polarity_table)
        except (
            comp.IncomparableKinds,
            comp.UnknownPolarity,
            comp.AmbiguousPrecision,
        ) as exc:
            notes.append(f"comparison degraded: {exc}")
            return first.text, None, None
        phrase = self._order_phrase(outcome, first.text, last.text, question)
        triple = EvidenceTriple(first.text, phrase, last.text)
        return comp.resolve_final(outcome, subjects, question), outcome, triple

    def _order_phrase(
        self, outcome: ComparisonOutcome, first_raw: str, last_raw: str, question: str
    ) -> str:
        if outcome is ComparisonOutcome.EQUAL:
            return "equal"
        if outcome is ComparisonOutcome.NOT_EQUAL:
            return "not equal"
        first_value = comp.parse_value(first_raw)
        last_value = comp.parse_value(last_raw)
        try:
            order = comp.compare_values(first_value, last_value)
        except (comp.IncomparableKinds, comp.AmbiguousPrecision):
            order = 0
        if order < 0:
            return "less than"
        if order > 0:
            return "greater than"
        # Remote verdict with no locally derivable order: back it out from
        # the polarity cue when one exists.
        try:
            polarity = comp.question_polarity(question, self.polarity_table)
        except comp.UnknownPolarity:
            return "differs from"
        first_meets = outcome is ComparisonOutcome.FIRST_MEETS
        smaller = polarity == "smaller_wins"
        return "less than" if first_meets == smaller else "greater than"

    def _fallback_record(self, example: Example, notes: list[str]) -> PredictionRecord:
        """Longest-sentence lexical fallback: never emit an empty answer."""
        best: tuple[int, int, str, str] | None = None
        for paragraph in example.context:
            for sidx, sentence in enumerate(paragraph.sentences):
                if best is None or len(sentence) > len(best[3]):
                    best = (paragraph.index, sidx, paragraph.title, sentence)
        if best is None:
            return PredictionRecord(
                id=example.id,
                answer="unknown",
                supporting_facts=frozenset(),
                evidence=(),
                notes=tuple(notes),
            )
        _, sidx, title, sentence = best
        mentions = entity_spans(sentence)
        if mentions:
            answer = mentions[0][0]
        else:
            answer = " ".join(sentence.split()[:5])
        return PredictionRecord(
            id=example.id,
            answer=answer or "unknown",
            supporting_facts=frozenset({(title, sidx)}),
            evidence=(),
            notes=tuple(notes),
        )

    def _debug(self, decomposition: Decomposition) -> dict | None:
        if not self.config.collect_debug:
            return None
        return {
            "qtype": decomposition.qtype.serialize(),
            "subjects": list(decomposition.subjects),
            "relations": list(decomposition.relations),
        }

    def run_split(self, examples) -> list[PredictionRecord]:
        examples = list(examples)
        if self.config.parallelism <= 1 or len(examples) <= 1:
            return [self.run_question(ex) for ex in examples]
        with ThreadPoolExecutor(max_workers=self.config.parallelism) as pool:
            return list(pool.map(self.run_question, examples))


def run_question(example: Example, config: PipelineConfig) -> PredictionRecord:
    return PipelineRuntime(config).run_question(example)


def run_split(examples, config: PipelineConfig) -> list[PredictionRecord]:
    return PipelineRuntime(config).run_split(examples)


def predictions_to_submission(records) -> dict:
    """Official submission shape: answer, sp, and evidence keyed by id."""
    answer: dict[str, str] = {}
    sp: dict[str, list] = {}
    evidence: dict[str, list] = {}
    for record in records:
        answer[record.id] = record.answer
        sp[record.id] = sorted([t, i] for t, i in record.supporting_facts)
        evidence[record.id] = [triple.as_list() for triple in record.evidence]
    return {"answer": answer, "sp": sp, "evidence": evidence}


def serialize_submission(submission: dict) -> str:
    """Canonical byte form, stable across runs and parallelism levels."""
    return json.dumps(
        submission, sort_keys=True, ensure_ascii=False, separators=(",", ":")
    ) + "\n"


def write_predictions(records, path: str | Path) -> None:
    Path(path).write_text(
        serialize_submission(predictions_to_submission(records)), encoding="utf-8"
    )

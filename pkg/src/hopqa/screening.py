"""Query-aware entity-tree paragraph screening.

A breadth-first entity tree is grown from the question subjects: a frontier
entity is fuzzily located in context sentences, and entities co-occurring in
a matched sentence become its children, but only when that sentence also
matches one of the question relations.  Screening then orders paragraphs by
how close their tree level sits to the hop being answered.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .relmatch import relation_match
from .similarity import SimilarityConfig, fuzzy_locate, lcs_f1
from .spans import collapse_ws, entity_spans, fold, strip_trailing_punct

Source = tuple[int, int]  # (paragraph index, sentence index)


class EmptyTreeError(Exception):
    """Screening was asked to rank paragraphs for a tree with no roots."""


def extract_entities(text: str) -> list[tuple[str, tuple[int, int]]]:
    """Heuristic entity mentions (text, char span) for a sentence."""
    return entity_spans(text)


def normalize_entity(text: str) -> str:
    """Identity key for the visited set: folded, squashed, punct-stripped."""
    return strip_trailing_punct(collapse_ws(fold(text)))


@dataclass
class EntityNode:
    entity: str
    level: int
    source: Source | None = None  # sentence where the node was attached
    parent: "EntityNode | None" = None
    children: list["EntityNode"] = field(default_factory=list)
    appearances: list[Source] = field(default_factory=list)


@dataclass
class EntityTree:
    roots: list[EntityNode] = field(default_factory=list)
    levels: dict[int, list[EntityNode]] = field(default_factory=dict)

    def add(self, node: EntityNode) -> None:
        self.levels.setdefault(node.level, []).append(node)
        if node.level == 0:
            self.roots.append(node)
        else:
            node.parent.children.append(node)

    def level_entities(self, level: int) -> list[str]:
        return [n.entity for n in self.levels.get(level, [])]

    @property
    def depth(self) -> int:
        return max(self.levels) if self.levels else 0


class HeuristicEntities:
    """Default mention provider; caches per sentence."""

    def __init__(self) -> None:
        self._cache: dict[Source, list[str]] = {}

    def entities(self, source: Source, sentence: str) -> list[str]:
        if source not in self._cache:
            self._cache[source] = [text for text, _ in entity_spans(sentence)]
        return self._cache[source]


class AnnotatedEntities:
    """Mention provider backed by an external annotation side file."""

    def __init__(self, mapping: dict[Source, list[str]]):
        self._mapping = mapping

    def entities(self, source: Source, sentence: str) -> list[str]:
        return self._mapping.get(source, [])


def load_entity_annotations(path: str | Path) -> dict[str, dict[Source, list[str]]]:
    """Side file: {example_id: {paragraph_idx: {sentence_idx: [entity, ...]}}}."""
    with open(path, encoding="utf-8") as handle:
        raw = json.load(handle)
    result: dict[str, dict[Source, list[str]]] = {}
    for example_id, paragraphs in raw.items():
        mapping: dict[Source, list[str]] = {}
        for pidx, sentences in paragraphs.items():
            for sidx, entities in sentences.items():
                mapping[(int(pidx), int(sidx))] = list(entities)
        result[example_id] = mapping
    return result


def build_entity_tree(
    question_entities: list[str] | tuple[str, ...],
    relations: list[str] | tuple[str, ...],
    context,
    config: SimilarityConfig | None = None,
    entity_provider=None,
    statement_patterns: dict | None = None,
) -> EntityTree:
    """Grow the entity tree over `context` (a sequence of paragraphs).

    Each entity joins at most once, at the shallowest level where it is
    reached; identity is judged on the normalized form.  A child is attached
    only when its host sentence fuzzily matches at least one question
    relation, which keeps topic-adjacent but query-irrelevant entities out.
    """
    config = config or SimilarityConfig()
    provider = entity_provider or HeuristicEntities()
    tree = EntityTree()
    visited: set[str] = set()

    frontier: list[EntityNode] = []
    for entity in question_entities:
        key = normalize_entity(entity)
        if not key or key in visited:
            continue
        visited.add(key)
        node = EntityNode(entity=entity, level=0)
        tree.add(node)
        frontier.append(node)

    # Regulation verdicts are per sentence, independent of the frontier.
    regulation_cache: dict[Source, bool] = {}

    def sentence_matches_query(source: Source, sentence: str) -> bool:
        if source not in regulation_cache:
            regulation_cache[source] = any(
                relation_match(
                    rel, sentence, config.sigma_relation, config.granularity,
                    statement_patterns,
                )
                for rel in relations
            )
        return regulation_cache[source]

    while frontier:
        next_frontier: list[EntityNode] = []
        for node in frontier:
            for paragraph in context:
                pidx = paragraph.index
                for sidx, sentence in enumerate(paragraph.sentences):
                    located = fuzzy_locate(
                        node.entity, sentence, config.sigma_entity, config.granularity
                    )
                    if located is None:
                        continue
                    source = (pidx, sidx)
                    node.appearances.append(source)
                    if not sentence_matches_query(source, sentence):
                        continue
                    for mention in provider.entities(source, sentence):
                        key = normalize_entity(mention)
                        if not key or key in visited:
                            continue
                        visited.add(key)
                        child = EntityNode(
                            entity=strip_trailing_punct(mention),
                            level=node.level + 1,
                            source=source,
                            parent=node,
                        )
                        tree.add(child)
                        next_frontier.append(child)
        frontier = next_frontier
    return tree


def paragraph_token_cost(paragraph) -> int:
    """Whitespace token count over the paragraph's sentences."""
    return sum(len(sentence.split()) for sentence in paragraph.sentences)


def _admit(ordered: list[int], context, budget_tokens: int) -> list[int]:
    """Prefix of `ordered` fitting the budget; the top paragraph always enters."""
    admitted: list[int] = []
    used = 0
    for pidx in ordered:
        cost = paragraph_token_cost(context[pidx])
        if admitted and used + cost > budget_tokens:
            break
        admitted.append(pidx)
        used += cost
    return admitted


def screen_paragraphs(
    tree: EntityTree,
    hop: int,
    context,
    budget_tokens: int = 512,
) -> list[int]:
    """Paragraph indices for one hop, nearest tree level first.

    A non-root node is associated with the paragraph where it attached; a
    root with every paragraph it appears in.  Paragraphs are ranked by the
    smallest |level - hop| over their nodes (context order within a rank),
    unassociated paragraphs follow in context order, and the list is cut at
    the token budget.
    """
    if not tree.roots:
        raise EmptyTreeError("entity tree has no roots")
    if budget_tokens < 1:
        raise ValueError("budget_tokens must be >= 1")
    distance: dict[int, int] = {}
    for level, nodes in tree.levels.items():
        for node in nodes:
            if node.source is not None:
                paragraphs = {node.source[0]}
            else:
                paragraphs = {p for p, _ in node.appearances}
            for pidx in paragraphs:
                d = abs(level - hop)
                if d < distance.get(pidx, len(context) + hop + 1):
                    distance[pidx] = d
    associated = sorted(distance, key=lambda p: (distance[p], p))
    rest = [p.index for p in context if p.index not in distance]
    return _admit(associated + rest, _by_index(context), budget_tokens)


def _by_index(context) -> dict:
    return {p.index: p for p in context}


@dataclass
class ScreeningResult:
    """Per-hop screening outcome recorded by the pipeline."""

    per_hop: dict[int, list[int]] = field(default_factory=dict)
    budget_used: dict[int, int] = field(default_factory=dict)

    def record(self, hop: int, indices: list[int], context) -> None:
        lookup = _by_index(context)
        self.per_hop[hop] = list(indices)
        self.budget_used[hop] = sum(paragraph_token_cost(lookup[i]) for i in indices)


class TreeScreener:
    """Entity-tree strategy (the default)."""

    name = "qetps"

    def __init__(self, tree: EntityTree, budget_tokens: int):
        self.tree = tree
        self.budget_tokens = budget_tokens

    def screen(self, hop: int, sub_question, context) -> list[int]:
        return screen_paragraphs(self.tree, hop, context, self.budget_tokens)


class PassthroughScreener:
    """No screening: context order, still budget-limited."""

    name = "none"

    def __init__(self, budget_tokens: int):
        self.budget_tokens = budget_tokens

    def screen(self, hop: int, sub_question, context) -> list[int]:
        ordered = [p.index for p in context]
        return _admit(ordered, _by_index(context), self.budget_tokens)


class LexicalRankScreener:
    """Rank paragraphs by best sentence similarity to the sub-question text."""

    name = "lexical-rank"

    def __init__(self, budget_tokens: int, granularity: str = "character"):
        self.budget_tokens = budget_tokens
        self.granularity = granularity

    def screen(self, hop: int, sub_question, context) -> list[int]:
        needle = f"{sub_question.subject} {sub_question.relation}"
        scored = []
        for paragraph in context:
            best = max(
                (lcs_f1(needle, s, self.granularity) for s in paragraph.sentences),
                default=0.0,
            )
            scored.append((-best, paragraph.index))
        ordered = [pidx for _, pidx in sorted(scored)]
        return _admit(ordered, _by_index(context), self.budget_tokens)

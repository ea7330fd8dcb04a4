"""Locating relation evidence in context sentences.

Relation labels are canonical ("place of birth") while sentences carry
surface forms ("born in"), so each label is expanded to the statement
patterns that commonly express it before fuzzy matching.  Tables ship as
package data and can be overridden with user files.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .similarity import Match, fuzzy_locate


def _load_packaged(name: str):
    with resources.files("hopqa.data").joinpath(name).open(encoding="utf-8") as handle:
        return json.load(handle)


def _load(name: str, path: str | Path | None):
    if path is None:
        return _load_packaged(name)
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


@lru_cache(maxsize=8)
def load_relation_vocabulary(path: str | None = None) -> tuple[str, ...]:
    """Ordered relation label vocabulary (JSON list of strings)."""
    data = _load("relations.json", path)
    if not isinstance(data, list) or not all(isinstance(x, str) for x in data):
        raise ValueError("relation vocabulary must be a JSON list of strings")
    return tuple(data)


@lru_cache(maxsize=8)
def load_cue_table(path: str | None = None) -> dict:
    """Question-side cue table: JSON map of cue phrase to relation label."""
    data = _load("cues.json", path)
    if not isinstance(data, dict):
        raise ValueError("cue table must be a JSON object")
    return {k.casefold(): v for k, v in data.items()}


@lru_cache(maxsize=8)
def load_composites(path: str | None = None) -> dict:
    """Kinship composites: JSON map of phrase to relation chain."""
    data = _load("composites.json", path)
    if not isinstance(data, dict):
        raise ValueError("composite table must be a JSON object")
    return {k.casefold(): tuple(v) for k, v in data.items()}


@lru_cache(maxsize=8)
def load_statement_patterns(path: str | None = None) -> dict:
    """Statement-side surface forms per relation label."""
    data = _load("statement_patterns.json", path)
    if not isinstance(data, dict):
        raise ValueError("statement pattern table must be a JSON object")
    return {k: tuple(v) for k, v in data.items()}


def surface_forms(relation: str, patterns: dict | None = None) -> tuple[str, ...]:
    """The label itself plus its statement patterns, longest first."""
    table = patterns if patterns is not None else load_statement_patterns()
    forms = {relation, *table.get(relation, ())}
    return tuple(sorted(forms, key=lambda f: (-len(f), f)))


def relation_match(
    relation: str,
    sentence: str,
    threshold: float,
    granularity: str = "character",
    patterns: dict | None = None,
) -> Match | None:
    """Best fuzzy match of any surface form of `relation` in `sentence`."""
    best: Match | None = None
    for form in surface_forms(relation, patterns):
        found = fuzzy_locate(form, sentence, threshold, granularity)
        if found and (best is None or found.score > best.score):
            best = found
            if best.score == 1.0:
                break
    return best

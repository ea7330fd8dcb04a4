"""Scripted responses for the echo backend.

These cover the eight-question demo split that ships with the pipeline
package, so protocol and integration tests run without any model weights.
Scores are synthetic but shaped like real classifier output: a dominant
probability on the true type, and per-type relation rows whose fused
ranking puts the intended relations on top with wide margins.
"""

from __future__ import annotations

from dataclasses import dataclass

from .protocol import N_TYPES, TYPE_ORDER

VOCABULARY = (
    "father",
    "mother",
    "spouse",
    "director",
    "producer",
    "country of citizenship",
    "publication date",
    "date of birth",
    "date of death",
    "place of birth",
    "place of death",
    "inception",
)


@dataclass(frozen=True)
class ScriptedExtract:
    type_index: int
    subjects: tuple[str, ...]
    ranked: tuple[str, ...]  # intended fused ranking, best first


def _type_probs(type_index: int) -> list[float]:
    return [0.91 if t == type_index else 0.03 for t in range(N_TYPES)]


def _per_type(type_index: int, ranked: tuple[str, ...]) -> list[list[float]]:
    rows = []
    for t in range(N_TYPES):
        if t == type_index:
            row = [0.50 - 0.02 * k for k in range(len(VOCABULARY))]
            for position, relation in enumerate(ranked):
                row[VOCABULARY.index(relation)] = 0.95 - 0.10 * position
        else:
            # small deterministic noise, well below the dominant row
            row = [((3 * t + 5 * k) % 10) / 100 for k in range(len(VOCABULARY))]
        rows.append(row)
    return rows


def extract_response(entry: ScriptedExtract, span_mode: bool) -> dict:
    body: dict = {
        "type_probs": _type_probs(entry.type_index),
        "subjects": list(entry.subjects),
    }
    if span_mode:
        body["relation_spans"] = list(entry.ranked)
    else:
        body["relation_scores"] = {
            "vocabulary": list(VOCABULARY),
            "per_type": _per_type(entry.type_index, entry.ranked),
        }
    return body


def _qtype(name: str) -> int:
    return TYPE_ORDER.index(name)


EXTRACT_SCRIPT: dict[str, ScriptedExtract] = {
    "What is the place of birth of Kévin Ledanois's father?": ScriptedExtract(
        _qtype("compositional"), ("Kévin Ledanois",), ("father", "place of birth")
    ),
    "What nationality is the director of film Top Floor Girl?": ScriptedExtract(
        _qtype("compositional"),
        ("Top Floor Girl",),
        ("director", "country of citizenship"),
    ),
    "Which film came out earlier, Aram + Aram = Kinnaram or Thayagam?": ScriptedExtract(
        _qtype("comparison"),
        ("Aram + Aram = Kinnaram", "Thayagam"),
        ("publication date", "inception"),
    ),
    "Who is younger, Osita Chidoka or David Faurschou?": ScriptedExtract(
        _qtype("comparison"),
        ("Osita Chidoka", "David Faurschou"),
        ("date of birth", "inception"),
    ),
    "Who is the paternal grandfather of Kerry Earnhardt?": ScriptedExtract(
        _qtype("inference"), ("Kerry Earnhardt",), ("father", "mother")
    ),
    "Who is Alice Claypoole Vanderbilt's mother-in-law?": ScriptedExtract(
        _qtype("inference"),
        ("Alice Claypoole Vanderbilt",),
        ("spouse", "mother"),
    ),
    "Which film has the director who is older, The Woman Next Door or La Estatua De Carne?": ScriptedExtract(
        _qtype("bridge_comparison"),
        ("The Woman Next Door", "La Estatua De Carne"),
        ("director", "date of birth"),
    ),
    "Which film has the director died later, Fugitives For A Night or Chinese In Paris?": ScriptedExtract(
        _qtype("bridge_comparison"),
        ("Fugitives For A Night", "Chinese In Paris"),
        ("director", "date of death"),
    ),
}

# (subject, relation) -> answer text; the source is located in whatever
# paragraphs the request carries, so the script composes with any screening.
READ_SCRIPT: dict[tuple[str, str], str] = {
    ("Kévin Ledanois", "father"): "Yvon Ledanois",
    ("Yvon Ledanois", "place of birth"): "Montreuil-sous-Bois",
    ("Kerry Earnhardt", "father"): "Dale Earnhardt",
    ("Dale Earnhardt", "father"): "Ralph Earnhardt",
}
READ_SCRIPT_SCORE = 0.97

# question -> comparison state
COMPARE_SCRIPT: dict[str, int] = {
    "Which film came out earlier, Aram + Aram = Kinnaram or Thayagam?": 2,
    "Who is younger, Osita Chidoka or David Faurschou?": 2,
    "Which film has the director who is older, The Woman Next Door or La Estatua De Carne?": 3,
    "Which film has the director died later, Fugitives For A Night or Chinese In Paris?": 3,
}

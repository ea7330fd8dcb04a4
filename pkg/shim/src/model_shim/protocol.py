"""Wire-protocol contract: task names, the type axis, and score fusion.

The server answers POST /v1/infer with a JSON body {"task", "payload"}:

  extract  payload {"question", optional "mode": "span"}
           -> {"type_probs": [4 reals summing to 1],
               "subjects": [str, ...],
               "relation_scores": {"vocabulary": [str, ...],
                                   "per_type": [[real, ...] x 4]}}
           or, in span mode,
           -> {"type_probs", "subjects", "relation_spans": [str, ...]}
  read     payload {"subject", "relation",
                    "paragraphs": [{"title", "sentences"}, ...]}
           -> {"answer": str, "score": real, "source": [paragraph, sentence]}
  compare  payload {"question", "first", "last"}
           -> {"state": 0|1|2|3}
             (0 not equal, 1 equal, 2 first meets, 3 last meets)

Relation-score fusion deliberately lives on the CLIENT side: the server
ships raw per-type rows and the type distribution, and the client mixes
them.  `fused_scores`/`ranked_relations` below are the server's own local
reference for that mix, used to cross-check that a client reproduces it.
"""

from __future__ import annotations

TASKS = ("extract", "read", "compare")

# Canonical order of the four question types on the type_probs axis.
TYPE_ORDER = ("compositional", "inference", "comparison", "bridge_comparison")
N_TYPES = len(TYPE_ORDER)


class MalformedRequest(Exception):
    """The request body does not satisfy the task's payload contract."""


class ModelNotLoaded(Exception):
    """The serving backend has no usable model behind it."""


def fused_scores(
    type_probs: list[float] | tuple[float, ...],
    per_type: list[list[float]] | tuple[tuple[float, ...], ...],
) -> list[float]:
    """Probability-weighted mix of the per-type score rows."""
    if len(type_probs) != N_TYPES or len(per_type) != N_TYPES:
        raise ValueError(f"expected {N_TYPES} type probabilities and rows")
    size = len(per_type[0])
    return [
        sum(type_probs[t] * per_type[t][k] for t in range(N_TYPES))
        for k in range(size)
    ]


def ranked_relations(
    type_probs: list[float] | tuple[float, ...],
    vocabulary: list[str] | tuple[str, ...],
    per_type: list[list[float]] | tuple[tuple[float, ...], ...],
) -> list[str]:
    """Vocabulary ranked by fused score, ties broken by vocabulary order."""
    scores = fused_scores(type_probs, per_type)
    order = sorted(range(len(vocabulary)), key=lambda k: (-scores[k], k))
    return [vocabulary[k] for k in order]

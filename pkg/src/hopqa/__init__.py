"""Multi-hop question answering over titled paragraph contexts.

The pipeline decomposes a question into (subject, relation) sub-questions,
screens paragraphs with a query-aware entity tree, reads each sub-answer
lexically, and settles comparison questions with a deterministic value
comparator.  Every stage can be swapped for a remote model server speaking
the bundled wire protocol.
"""

from .comparator import (
    AmbiguousPrecision,
    ComparableValue,
    ComparisonOutcome,
    IncomparableKinds,
    UnknownPolarity,
    compare,
    compare_values,
    parse_value,
    resolve_final,
)
from .config import ConfigError, PipelineConfig
from .corpus import (
    Example,
    EvidenceTriple,
    InvariantViolation,
    Paragraph,
    QuestionType,
    SchemaError,
    dump_split,
    load_split,
)
from .decompose import (
    ANSWER_PLACEHOLDER,
    ArityMismatch,
    Decomposition,
    DimensionMismatch,
    ExtractionFailed,
    RelationScores,
    RuleBasedExtractor,
    SubQuestion,
    compose_sub_questions,
    fuse_relation_scores,
    one_hot,
)
from .metrics import (
    ScoreReport,
    Scores4,
    answer_scores,
    joint_scores,
    normalize_answer,
    score_predictions,
    set_scores,
)
from .pipeline import (
    PipelineRuntime,
    PredictionRecord,
    predictions_to_submission,
    run_question,
    run_split,
    write_predictions,
)
from .reader import LexicalReader, NoAnswerError, SubAnswer
from .remote import RemoteError, WireClient
from .screening import (
    EmptyTreeError,
    EntityNode,
    EntityTree,
    build_entity_tree,
    screen_paragraphs,
)
from .similarity import Match, SimilarityConfig, fuzzy_locate, lcs_f1, lcs_length

__version__ = "0.1.0"

__all__ = [
    "ANSWER_PLACEHOLDER",
    "AmbiguousPrecision",
    "ArityMismatch",
    "ComparableValue",
    "ComparisonOutcome",
    "ConfigError",
    "Decomposition",
    "DimensionMismatch",
    "EmptyTreeError",
    "EntityNode",
    "EntityTree",
    "Example",
    "EvidenceTriple",
    "ExtractionFailed",
    "IncomparableKinds",
    "InvariantViolation",
    "LexicalReader",
    "Match",
    "NoAnswerError",
    "Paragraph",
    "PipelineConfig",
    "PipelineRuntime",
    "PredictionRecord",
    "QuestionType",
    "RelationScores",
    "RemoteError",
    "RuleBasedExtractor",
    "SchemaError",
    "ScoreReport",
    "Scores4",
    "SimilarityConfig",
    "SubAnswer",
    "SubQuestion",
    "UnknownPolarity",
    "WireClient",
    "answer_scores",
    "build_entity_tree",
    "compare",
    "compare_values",
    "compose_sub_questions",
    "dump_split",
    "fuse_relation_scores",
    "fuzzy_locate",
    "joint_scores",
    "lcs_f1",
    "lcs_length",
    "load_split",
    "normalize_answer",
    "one_hot",
    "parse_value",
    "predictions_to_submission",
    "resolve_final",
    "run_question",
    "run_split",
    "score_predictions",
    "screen_paragraphs",
    "set_scores",
    "write_predictions",
]

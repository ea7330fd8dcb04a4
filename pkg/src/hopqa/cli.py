"""Command line interface.

Subcommands:
  run    full pipeline over a split file, writing submission-shaped JSON
  eval   score a prediction file against gold
  stage  run one stage (decompose | screen | read | compare) on piped JSON

Config precedence: flags > HOPQA_REMOTE_ENDPOINT env var > config file >
defaults.  Exit codes: 0 ok, 1 operational error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import comparator as comp
from .config import ConfigError, PipelineConfig
from .corpus import (
    InvariantViolation,
    Paragraph,
    SchemaError,
    load_split,
)
from .decompose import ArityMismatch, ExtractionFailed, compose_sub_questions
from .metrics import MissingPredictions, score_predictions
from .pipeline import PipelineRuntime, write_predictions
from .reader import LexicalReader, NoAnswerError
from .remote import RemoteError
from .screening import EmptyTreeError, build_entity_tree, screen_paragraphs
from .similarity import SimilarityConfig
from .decompose import SubQuestion

_CONFIG_FLAGS = (
    "sigma_entity",
    "sigma_relation",
    "granularity",
    "context_budget_tokens",
    "extractor_backend",
    "reader_backend",
    "comparator_backend",
    "screening",
    "remote_endpoint",
    "remote_timeout",
    "parallelism",
    "cue_table_path",
    "statement_patterns_path",
    "polarity_table_path",
    "entity_annotations_path",
    "strict_load",
    "collect_debug",
)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("pipeline config")
    group.add_argument("--config", help="JSON config file")
    group.add_argument("--sigma-entity", type=float, dest="sigma_entity")
    group.add_argument("--sigma-relation", type=float, dest="sigma_relation")
    group.add_argument("--granularity", choices=("character", "token"))
    group.add_argument(
        "--context-budget-tokens", type=int, dest="context_budget_tokens"
    )
    group.add_argument(
        "--extractor",
        choices=("rule", "remote-cre", "remote-sre"),
        dest="extractor_backend",
    )
    group.add_argument(
        "--reader", choices=("lexical", "remote"), dest="reader_backend"
    )
    group.add_argument(
        "--comparator",
        choices=("deterministic", "remote"),
        dest="comparator_backend",
    )
    group.add_argument("--screening", choices=("qetps", "none", "lexical-rank"))
    group.add_argument("--remote-endpoint", dest="remote_endpoint")
    group.add_argument("--remote-timeout", type=float, dest="remote_timeout")
    group.add_argument("--parallelism", type=int)
    group.add_argument("--cue-table", dest="cue_table_path")
    group.add_argument("--statement-patterns", dest="statement_patterns_path")
    group.add_argument("--polarity-table", dest="polarity_table_path")
    group.add_argument("--entity-annotations", dest="entity_annotations_path")
    group.add_argument(
        "--strict-load", action="store_true", default=None, dest="strict_load"
    )
    group.add_argument(
        "--debug", action="store_true", default=None, dest="collect_debug"
    )


def _load_config(args) -> PipelineConfig:
    data: dict = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as handle:
            data = json.load(handle)
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    env_endpoint = os.environ.get("HOPQA_REMOTE_ENDPOINT")
    if env_endpoint:
        data["remote_endpoint"] = env_endpoint
    for key in _CONFIG_FLAGS:
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    return PipelineConfig.from_dict(data)


def cmd_run(args) -> int:
    config = _load_config(args)
    examples = load_split(args.input, strict=config.strict_load)
    rng_state = random.getstate()
    runtime = PipelineRuntime(config)
    records = runtime.run_split(examples)
    if random.getstate() != rng_state:
        print("error: pipeline consulted the global RNG", file=sys.stderr)
        return 1
    write_predictions(records, args.out)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as handle:
            for record in records:
                handle.write(
                    json.dumps(record.record(), ensure_ascii=False, sort_keys=True)
                )
                handle.write("\n")
    print(f"wrote {len(records)} predictions to {args.out}")
    return 0


def cmd_eval(args) -> int:
    gold = load_split(args.gold)
    with open(args.pred, encoding="utf-8") as handle:
        submission = json.load(handle)
    if not isinstance(submission, dict):
        print("error: prediction file must hold a JSON object", file=sys.stderr)
        return 1
    report = score_predictions(gold, submission, allow_partial=args.allow_partial)
    print(report.to_json() if args.json else report.format_table())
    return 0


def _read_stdin_payload() -> dict:
    payload = json.load(sys.stdin)
    if not isinstance(payload, dict):
        raise ValueError("stage input must be a JSON object")
    return payload


def _emit(body: dict) -> None:
    sys.stdout.write(json.dumps(body, ensure_ascii=False, sort_keys=True) + "\n")


def _payload_paragraphs(payload: dict) -> tuple[Paragraph, ...]:
    raw = payload.get("context")
    if not isinstance(raw, list):
        raise ValueError("stage input needs a context: [[title, [sentences]], ...]")
    return tuple(
        Paragraph(title=str(title), sentences=tuple(str(s) for s in sentences), index=i)
        for i, (title, sentences) in enumerate(raw)
    )


def cmd_stage(args) -> int:
    config = _load_config(args)
    payload = _read_stdin_payload()
    if args.stage_name == "decompose":
        runtime = PipelineRuntime(config)
        decomposition = runtime.extractor.extract(str(payload["question"]))
        subs = compose_sub_questions(decomposition)
        _emit(
            {
                "type": decomposition.qtype.serialize(),
                "subjects": list(decomposition.subjects),
                "relations": list(decomposition.relations),
                "sub_questions": [
                    {
                        "subject": sq.subject,
                        "relation": sq.relation,
                        "chain": sq.chain_id,
                        "hop": sq.hop,
                    }
                    for sq in subs
                ],
            }
        )
    elif args.stage_name == "screen":
        paragraphs = _payload_paragraphs(payload)
        similarity = SimilarityConfig(
            sigma_entity=config.sigma_entity,
            sigma_relation=config.sigma_relation,
            granularity=config.granularity,
        )
        tree = build_entity_tree(
            [str(e) for e in payload.get("entities", [])],
            [str(r) for r in payload.get("relations", [])],
            paragraphs,
            config=similarity,
        )
        indices = screen_paragraphs(
            tree,
            int(payload.get("hop", 1)),
            paragraphs,
            config.context_budget_tokens,
        )
        _emit(
            {
                "paragraphs": indices,
                "levels": {
                    str(level): tree.level_entities(level)
                    for level in sorted(tree.levels)
                },
            }
        )
    elif args.stage_name == "read":
        paragraphs = _payload_paragraphs(payload)
        reader = LexicalReader()
        sub_question = SubQuestion(
            str(payload["subject"]), str(payload["relation"]), 0, 1
        )
        sub_answer = reader.read(sub_question, paragraphs, config)
        _emit(
            {
                "answer": sub_answer.text,
                "score": sub_answer.score,
                "source": list(sub_answer.source),
            }
        )
    else:  # compare
        first = comp.parse_value(str(payload["first"]))
        last = comp.parse_value(str(payload["last"]))
        outcome = comp.compare(str(payload["question"]), first, last)
        _emit({"state": int(outcome)})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hopqa",
        description="Multi-hop question answering over titled paragraph contexts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="run the full pipeline over a split")
    run_parser.add_argument("--input", required=True, help="input split JSON")
    run_parser.add_argument("--out", required=True, help="prediction output path")
    run_parser.add_argument("--trace", help="per-question trace JSONL path")
    _add_config_flags(run_parser)
    run_parser.set_defaults(func=cmd_run)

    eval_parser = sub.add_parser("eval", help="score predictions against gold")
    eval_parser.add_argument("--pred", required=True, help="prediction JSON")
    eval_parser.add_argument("--gold", required=True, help="gold split JSON")
    eval_parser.add_argument("--json", action="store_true", help="emit JSON report")
    eval_parser.add_argument(
        "--allow-partial",
        action="store_true",
        help="score only the ids present in the prediction file",
    )
    eval_parser.set_defaults(func=cmd_eval)

    stage_parser = sub.add_parser("stage", help="run one stage on piped JSON")
    stage_parser.add_argument(
        "stage_name", choices=("decompose", "screen", "read", "compare")
    )
    _add_config_flags(stage_parser)
    stage_parser.set_defaults(func=cmd_stage)

    return parser


_OPERATIONAL_ERRORS = (
    ConfigError,
    SchemaError,
    InvariantViolation,
    MissingPredictions,
    ExtractionFailed,
    ArityMismatch,
    EmptyTreeError,
    NoAnswerError,
    RemoteError,
    comp.IncomparableKinds,
    comp.UnknownPolarity,
    comp.AmbiguousPrecision,
    OSError,
    json.JSONDecodeError,
    KeyError,
    ValueError,
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _OPERATIONAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

import io
import json

import pytest

from hopqa.cli import main

from conftest import EXPECTED_PREDICTIONS


def _run_main(argv, monkeypatch=None, stdin_text=None):
    if stdin_text is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin_text))
    return main(argv)


@pytest.fixture()
def predictions_file(tmp_path, demo_path):
    out = tmp_path / "predictions.json"
    code = main(["run", "--input", str(demo_path), "--out", str(out)])
    assert code == 0
    return out


# --- run ---------------------------------------------------------------------


def test_run_writes_submission(predictions_file, demo_examples, capsys):
    body = json.loads(predictions_file.read_text(encoding="utf-8"))
    assert set(body) == {"answer", "sp", "evidence"}
    answers = [body["answer"][e.id] for e in demo_examples]
    assert answers == EXPECTED_PREDICTIONS


def test_run_reports_count(tmp_path, demo_path, capsys):
    out = tmp_path / "p.json"
    assert main(["run", "--input", str(demo_path), "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert f"wrote 8 predictions to {out}" in printed


def test_run_is_idempotent_bytes(tmp_path, demo_path):
    out1, out2 = tmp_path / "p1.json", tmp_path / "p2.json"
    assert main(["run", "--input", str(demo_path), "--out", str(out1)]) == 0
    assert main(
        ["run", "--input", str(demo_path), "--out", str(out2), "--parallelism", "8"]
    ) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_run_trace_jsonl(tmp_path, demo_path):
    out = tmp_path / "p.json"
    trace = tmp_path / "trace.jsonl"
    code = main(
        ["run", "--input", str(demo_path), "--out", str(out), "--trace", str(trace)]
    )
    assert code == 0
    lines = trace.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 8
    for line in lines:
        entry = json.loads(line)
        assert {"id", "answer", "sp", "evidence", "trace"} <= set(entry)
        assert entry["evidence"]
        assert entry["trace"]


def test_run_missing_input_is_operational_error(tmp_path, capsys):
    out = tmp_path / "p.json"
    code = main(["run", "--input", str(tmp_path / "nope.json"), "--out", str(out)])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_run_invalid_config_value(tmp_path, demo_path, capsys):
    out = tmp_path / "p.json"
    code = main(
        [
            "run", "--input", str(demo_path), "--out", str(out),
            "--sigma-entity", "7",
        ]
    )
    assert code == 1
    assert "sigma_entity" in capsys.readouterr().err


def test_usage_error_exit_code_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["run"])  # missing required --input/--out
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == 2


# --- config precedence ----------------------------------------------------------


def test_flag_beats_env_beats_file(tmp_path, monkeypatch):
    from hopqa.cli import _load_config, build_parser

    config_file = tmp_path / "config.json"
    config_file.write_text(
        json.dumps({"remote_endpoint": "http://file.invalid:1", "parallelism": 3}),
        encoding="utf-8",
    )
    parser = build_parser()
    base = ["run", "--input", "in.json", "--out", "out.json"]

    # File alone.
    monkeypatch.delenv("HOPQA_REMOTE_ENDPOINT", raising=False)
    config = _load_config(parser.parse_args(base + ["--config", str(config_file)]))
    assert config.remote_endpoint == "http://file.invalid:1"
    assert config.parallelism == 3

    # Env var overrides the file value...
    monkeypatch.setenv("HOPQA_REMOTE_ENDPOINT", "http://env.invalid:1")
    config = _load_config(parser.parse_args(base + ["--config", str(config_file)]))
    assert config.remote_endpoint == "http://env.invalid:1"
    assert config.parallelism == 3  # untouched routes keep file values

    # ...and an explicit flag overrides both.
    config = _load_config(
        parser.parse_args(
            base
            + [
                "--config", str(config_file),
                "--remote-endpoint", "http://flag.invalid:1",
                "--parallelism", "5",
            ]
        )
    )
    assert config.remote_endpoint == "http://flag.invalid:1"
    assert config.parallelism == 5


def test_env_endpoint_feeds_config(tmp_path, demo_path, monkeypatch):
    # With only the env var set, a remote backend validates successfully
    # (no ConfigError for the missing endpoint).
    monkeypatch.setenv("HOPQA_REMOTE_ENDPOINT", "http://localhost:1")
    out = tmp_path / "p.json"
    code = main(
        ["run", "--input", str(demo_path), "--out", str(out), "--comparator", "remote"]
    )
    assert code == 0


def test_remote_backend_without_endpoint_fails(tmp_path, demo_path, monkeypatch, capsys):
    monkeypatch.delenv("HOPQA_REMOTE_ENDPOINT", raising=False)
    out = tmp_path / "p.json"
    code = main(
        ["run", "--input", str(demo_path), "--out", str(out), "--comparator", "remote"]
    )
    assert code == 1
    assert "endpoint" in capsys.readouterr().err


# --- eval -------------------------------------------------------------------------


def test_eval_table_output(predictions_file, demo_path, capsys):
    code = main(["eval", "--pred", str(predictions_file), "--gold", str(demo_path)])
    assert code == 0
    table = capsys.readouterr().out
    assert "answer" in table and "joint" in table
    assert "0.7500" in table  # answer EM: 6 of 8 strict matches
    assert "[inference] n = 2" in table


def test_eval_json_output(predictions_file, demo_path, capsys):
    code = main(
        ["eval", "--pred", str(predictions_file), "--gold", str(demo_path), "--json"]
    )
    assert code == 0
    body = json.loads(capsys.readouterr().out)
    assert body["n"] == 8
    assert body["metrics"]["answer"]["em"] == pytest.approx(0.75)
    assert body["metrics"]["sp"]["em"] == pytest.approx(1.0)
    assert body["per_type"]["inference"]["answer"]["em"] == pytest.approx(1.0)


def test_eval_gold_vs_gold(tmp_path, demo_path, demo_examples, capsys):
    gold_pred = {
        "answer": {e.id: e.gold_answer for e in demo_examples},
        "sp": {e.id: [list(f) for f in sorted(e.supporting_facts)] for e in demo_examples},
        "evidence": {e.id: [t.as_list() for t in e.gold_evidence] for e in demo_examples},
    }
    pred_path = tmp_path / "gold_pred.json"
    pred_path.write_text(json.dumps(gold_pred), encoding="utf-8")
    code = main(["eval", "--pred", str(pred_path), "--gold", str(demo_path), "--json"])
    assert code == 0
    body = json.loads(capsys.readouterr().out)
    for axis in ("answer", "sp", "evidence", "joint"):
        for stat in ("em", "f1", "precision", "recall"):
            assert body["metrics"][axis][stat] == 1.0


def test_eval_missing_ids_fails(tmp_path, demo_path, capsys):
    pred_path = tmp_path / "partial.json"
    pred_path.write_text(json.dumps({"answer": {}, "sp": {}, "evidence": {}}))
    code = main(["eval", "--pred", str(pred_path), "--gold", str(demo_path)])
    assert code == 1
    assert "missing predictions" in capsys.readouterr().err


def test_eval_allow_partial(tmp_path, demo_path, demo_examples, capsys):
    keep = demo_examples[0]
    pred = {
        "answer": {keep.id: keep.gold_answer},
        "sp": {keep.id: [list(f) for f in sorted(keep.supporting_facts)]},
        "evidence": {keep.id: [t.as_list() for t in keep.gold_evidence]},
    }
    pred_path = tmp_path / "one.json"
    pred_path.write_text(json.dumps(pred), encoding="utf-8")
    code = main(
        [
            "eval", "--pred", str(pred_path), "--gold", str(demo_path),
            "--allow-partial", "--json",
        ]
    )
    assert code == 0
    body = json.loads(capsys.readouterr().out)
    assert body["n"] == 1
    assert len(body["missing"]) == 7


# --- stage -----------------------------------------------------------------------


def test_stage_decompose(monkeypatch, capsys, demo_examples):
    question = demo_examples[0].question
    code = _run_main(
        ["stage", "decompose"], monkeypatch, json.dumps({"question": question})
    )
    assert code == 0
    body = json.loads(capsys.readouterr().out)
    assert body["type"] == "compositional"
    assert body["subjects"] == ["Kévin Ledanois"]
    assert body["relations"] == ["father", "place of birth"]
    assert body["sub_questions"][1] == {
        "subject": "[ANS]", "relation": "place of birth", "chain": 0, "hop": 2,
    }


def test_stage_screen(monkeypatch, capsys):
    payload = {
        "entities": ["Alphaville"],
        "relations": ["directed", "born"],
        "hop": 2,
        "context": [
            ["P0", ["Alphaville was directed by Bramford."]],
            ["P1", ["Bramford was born in Carelia."]],
            ["P2", ["Nothing relevant here."]],
        ],
    }
    code = _run_main(["stage", "screen"], monkeypatch, json.dumps(payload))
    assert code == 0
    body = json.loads(capsys.readouterr().out)
    assert body["paragraphs"] == [1, 0, 2]
    assert body["levels"]["0"] == ["Alphaville"]
    assert body["levels"]["1"] == ["Bramford"]
    assert body["levels"]["2"] == ["Carelia"]


def test_stage_screen_empty_entities_fails(monkeypatch, capsys):
    payload = {"entities": [], "relations": ["directed"], "context": [["P0", ["x."]]]}
    code = _run_main(["stage", "screen"], monkeypatch, json.dumps(payload))
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_stage_read(monkeypatch, capsys):
    payload = {
        "subject": "Top Floor Girl",
        "relation": "director",
        "context": [["P0", ["Top Floor Girl is a film directed by Max Varnel."]]],
    }
    code = _run_main(["stage", "read"], monkeypatch, json.dumps(payload))
    assert code == 0
    body = json.loads(capsys.readouterr().out)
    assert body["answer"] == "Max Varnel"
    assert body["source"] == [0, 0]
    assert 0.0 < body["score"] <= 1.0


def test_stage_compare(monkeypatch, capsys):
    payload = {
        "question": "Which film has the director died later, A or B?",
        "first": "8 January 1969",
        "last": "23 May 2003",
    }
    code = _run_main(["stage", "compare"], monkeypatch, json.dumps(payload))
    assert code == 0
    assert json.loads(capsys.readouterr().out) == {"state": 3}


def test_stage_compare_incomparable(monkeypatch, capsys):
    payload = {
        "question": "Who is older, A or B?",
        "first": "January 28, 1956",
        "last": "Chano Urueta",
    }
    code = _run_main(["stage", "compare"], monkeypatch, json.dumps(payload))
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_stage_rejects_malformed_stdin(monkeypatch, capsys):
    code = _run_main(["stage", "decompose"], monkeypatch, "[1, 2, 3]")
    assert code == 1
    code = _run_main(["stage", "decompose"], monkeypatch, "not json")
    assert code == 1

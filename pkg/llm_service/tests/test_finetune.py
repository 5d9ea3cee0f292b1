import json

import pytest
from click.testing import CliRunner

from llm_service.cli import main
from llm_service.finetune import (FinetuneRecipe, TrainingDataError,
                                  finetune, format_chat_example,
                                  load_training_examples)
from llm_service.service import load_prompt


def _write_examples(path, rows):
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n")


GOOD_ROWS = [
    {"review_id": "r1", "targeted_text": "The ramp was great.",
     "label": "positive"},
    {"review_id": "r2", "targeted_text": "No ramp at all.",
     "label": "negative"},
]


def test_recipe_defaults_match_documented_run():
    recipe = FinetuneRecipe()
    assert recipe.lora_rank == 32
    assert recipe.lora_alpha == 16
    assert recipe.learning_rate == 3e-5
    assert recipe.batch_size == 64
    assert recipe.epochs == 10
    assert recipe.trainable_parameters == pytest.approx(83.89e6, rel=1e-4)


def test_malformed_label_is_fatal_before_training(tmp_path):
    path = tmp_path / "bad.jsonl"
    _write_examples(path, GOOD_ROWS + [
        {"review_id": "r3", "targeted_text": "x", "label": "pos"}])
    with pytest.raises(TrainingDataError, match="'pos'"):
        load_training_examples(str(path))
    with pytest.raises(TrainingDataError):
        finetune(str(path), dry_run=True)


def test_empty_file_is_fatal(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    with pytest.raises(TrainingDataError):
        load_training_examples(str(path))


def test_chat_format_structure():
    prompt = load_prompt()
    messages = format_chat_example(
        {"review_id": "r", "text": "Wide ramp.", "label": "positive"},
        prompt)
    assert [m["role"] for m in messages] == ["system", "user", "assistant"]
    assert messages[0]["content"] == prompt
    assert messages[1]["content"] == "Wide ramp."
    assert messages[2]["content"] == "positive"


def test_dry_run_embeds_verbatim_prompt(tmp_path):
    path = tmp_path / "train.jsonl"
    _write_examples(path, GOOD_ROWS)
    summary = finetune(str(path), dry_run=True)
    assert summary["n_examples"] == 2
    assert summary["recipe"]["lora_rank"] == 32
    first = summary["first_example"]
    assert first[0]["content"] == load_prompt()
    assert first[1]["content"] == "The ramp was great."


def test_cli_dry_run_prints_example_with_prompt(tmp_path):
    path = tmp_path / "train.jsonl"
    _write_examples(path, GOOD_ROWS)
    result = CliRunner().invoke(main, ["finetune", "--data", str(path),
                                       "--dry-run"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["dry_run"] is True
    assert payload["first_example"][0]["content"] == load_prompt()
    # the shipped prompt text appears verbatim in the printed example
    assert "You are a language model trained to identify the sentiment " \
           "for the accessibility from reviews." in result.output.replace(
               "\\n", "\n").replace('\\"', '"')


def test_cli_rejects_bad_label(tmp_path):
    path = tmp_path / "bad.jsonl"
    _write_examples(path, [{"review_id": "r", "targeted_text": "x",
                            "label": "meh"}])
    result = CliRunner().invoke(main, ["finetune", "--data", str(path),
                                       "--dry-run"])
    assert result.exit_code == 1
    assert "error:" in result.output


def test_full_training_requires_weights(tmp_path):
    path = tmp_path / "train.jsonl"
    _write_examples(path, GOOD_ROWS)
    with pytest.raises(RuntimeError):
        finetune(str(path), dry_run=False)

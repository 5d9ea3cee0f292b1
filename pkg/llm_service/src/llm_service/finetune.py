"""Fine-tune recipe for the attitude classifier.

Defaults mirror the documented training run: low-rank adapters of rank
32 with scaling factor 16 (~83.89M trainable parameters) on an 8B
instruction backbone, learning rate 3e-5, batch size 64, 10 epochs.
Examples are rendered in the standard OpenAI chat format with the
shipped system prompt.  Actual training needs the ``train`` extra plus
model weights; the dry run, which formats and prints the first example,
needs nothing beyond the recipe.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Iterator

from .service import VALID_LABELS, load_prompt


class TrainingDataError(ValueError):
    pass


@dataclass(frozen=True)
class FinetuneRecipe:
    base_model: str = "meta-llama/Meta-Llama-3-8B-Instruct"
    lora_rank: int = 32
    lora_alpha: int = 16
    learning_rate: float = 3e-5
    batch_size: int = 64
    epochs: int = 10
    trainable_parameters: int = 83_890_000  # ~83.89M

    def to_dict(self) -> dict:
        return asdict(self)


def load_training_examples(path: str) -> list[dict]:
    """Read {review_id, targeted_text, label} lines; any label outside
    the four classes is fatal before training starts."""
    examples = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            obj = json.loads(line)
            label = obj.get("label")
            if label not in VALID_LABELS:
                raise TrainingDataError(
                    f"line {lineno}: label {label!r} is not one of "
                    f"{sorted(VALID_LABELS)}")
            examples.append({"review_id": str(obj.get("review_id", "")),
                             "text": str(obj["targeted_text"]),
                             "label": label})
    if not examples:
        raise TrainingDataError(f"no training examples in {path}")
    return examples


def format_chat_example(example: dict, system_prompt: str) -> list[dict]:
    """OpenAI chat format: system prompt, user review text, assistant
    label (the lowercase wire-protocol form)."""
    return [
        {"role": "system", "content": system_prompt},
        {"role": "user", "content": example["text"]},
        {"role": "assistant", "content": example["label"]},
    ]


def iter_chat_examples(examples: list[dict],
                       system_prompt: str) -> Iterator[list[dict]]:
    for example in examples:
        yield format_chat_example(example, system_prompt)


def finetune(data_path: str, recipe: FinetuneRecipe | None = None,
             prompt_path: str | None = None, output_dir: str | None = None,
             dry_run: bool = False) -> dict:
    """Validate data, render chat examples, and either report the plan
    (dry run) or hand off to the trainer.

    Returns a summary dict; in dry-run mode it includes the formatted
    first example.  Full training requires GPU resources and the base
    model weights, so it raises a clear error when they are absent
    instead of training a degenerate model.
    """
    recipe = recipe or FinetuneRecipe()
    system_prompt = load_prompt(prompt_path)
    examples = load_training_examples(data_path)
    summary = {
        "n_examples": len(examples),
        "recipe": recipe.to_dict(),
        "dry_run": dry_run,
    }
    if dry_run:
        summary["first_example"] = format_chat_example(examples[0],
                                                       system_prompt)
        return summary
    try:
        import peft  # noqa: F401
        import torch  # noqa: F401
        import transformers  # noqa: F401
    except ImportError as exc:
        raise RuntimeError(
            "full fine-tuning requires the 'train' extra (torch, "
            f"transformers, peft): {exc}") from exc
    raise RuntimeError(
        f"base model weights for {recipe.base_model!r} are not bundled; "
        "point the trainer at a local checkout to train"
        + ("" if output_dir is None else f" (adapter would be written to "
                                         f"{output_dir})"))

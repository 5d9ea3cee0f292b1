"""Command-line entry points: ``serve`` and ``finetune``."""

from __future__ import annotations

import json
import sys

import click

from .finetune import FinetuneRecipe, TrainingDataError, finetune
from .service import ServiceConfig, create_app, default_prompt_path


@click.group()
def main() -> None:
    """Attitude-classification sidecar."""


@main.command()
@click.option("--stub", is_flag=True, help="Serve the deterministic "
              "rule-based stub instead of a model.")
@click.option("--port", type=int, default=8100, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--model", "model_id",
              default="meta-llama/Meta-Llama-3-8B-Instruct",
              show_default=True)
@click.option("--prompt-file", default=None,
              help="Override the shipped system prompt file.")
@click.option("--max-batch", type=int, default=256, show_default=True)
def serve(stub, port, host, model_id, prompt_file, max_batch) -> None:
    """Run the classification endpoint (POST /classify, GET /health)."""
    import uvicorn

    config = ServiceConfig(model_id=model_id,
                           prompt_path=prompt_file or default_prompt_path(),
                           max_batch_size=max_batch, port=port, stub=stub)
    try:
        app = create_app(config)
    except RuntimeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    uvicorn.run(app, host=host, port=port)


@main.command(name="finetune")
@click.option("--data", "data_path", required=True,
              type=click.Path(exists=True),
              help="Labeled examples (JSON lines with review_id, "
                   "targeted_text, label).")
@click.option("--rank", type=int, default=32, show_default=True)
@click.option("--alpha", type=int, default=16, show_default=True)
@click.option("--learning-rate", type=float, default=3e-5, show_default=True)
@click.option("--batch-size", type=int, default=64, show_default=True)
@click.option("--epochs", type=int, default=10, show_default=True)
@click.option("--prompt-file", default=None)
@click.option("--output", "output_dir", default=None)
@click.option("--dry-run", is_flag=True,
              help="Validate and print the first chat-formatted example "
                   "without training.")
def finetune_command(data_path, rank, alpha, learning_rate, batch_size,
                     epochs, prompt_file, output_dir, dry_run) -> None:
    """Fine-tune (or dry-run) the classifier on labeled examples."""
    recipe = FinetuneRecipe(lora_rank=rank, lora_alpha=alpha,
                            learning_rate=learning_rate,
                            batch_size=batch_size, epochs=epochs)
    try:
        summary = finetune(data_path, recipe, prompt_path=prompt_file,
                           output_dir=output_dir, dry_run=dry_run)
    except (TrainingDataError, RuntimeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(json.dumps(summary, indent=2))


if __name__ == "__main__":
    main()

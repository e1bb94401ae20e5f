from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from app.config import DEFAULT_CONFIG_FILE, Settings
from app.constants import (
    EXIT_INTERNAL,
    EXIT_INVALID_FORMAT,
    EXIT_OUT_OF_DOMAIN,
    EXIT_USAGE,
)
from app.exceptions import ClassifierError, InvalidFormat, OutOfDomain
from app.services import workflow
from app.services.corpus import generate_car_records, write_car_dataset
from app.utils.files import atomic_write_text
from app.utils.log import setup_logging

app = typer.Typer(
    help="Semi-supervised EM document classifier with dynamic class generation",
    no_args_is_help=True,
)
console = Console(soft_wrap=True)
err_console = Console(stderr=True, soft_wrap=True)


def _fail(code: int, message: str) -> None:
    err_console.print(f"[bold red]error:[/bold red] {escape(message)}")
    raise typer.Exit(code=code)


@contextmanager
def exit_codes() -> Iterator[None]:
    """Translate library errors into the documented exit codes"""
    try:
        yield
    except ValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(part) for part in first["loc"]) or "settings"
        _fail(EXIT_USAGE, f"invalid setting {key}: {first['msg']}")
    except FileNotFoundError as e:
        _fail(EXIT_USAGE, str(e))
    except InvalidFormat as e:
        _fail(EXIT_INVALID_FORMAT, str(e))
    except OutOfDomain as e:
        _fail(EXIT_OUT_OF_DOMAIN, str(e))
    except ClassifierError as e:
        _fail(EXIT_INTERNAL, f"{type(e).__name__}: {e}")


def load_settings(ctx: typer.Context, **overrides) -> Settings:
    """Settings from --config plus global and per-command flags"""
    options = ctx.obj or {}
    settings = Settings.load(
        options.get("config"),
        seed=options.get("seed"),
        output_dir=options.get("output_dir"),
        **overrides,
    )
    setup_logging(settings.log_level, err_console)
    return settings


@app.callback()
def main_options(
    ctx: typer.Context,
    config: Path = typer.Option(
        DEFAULT_CONFIG_FILE, "--config", "-c", help="Config file of `key = value` lines"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed (overrides config)"),
    output_dir: Optional[Path] = typer.Option(
        None, "--output-dir", "-o", help="Output directory (overrides config)"),
):
    ctx.obj = {"config": config, "seed": seed, "output_dir": output_dir}


@app.command()
def init(
    ctx: typer.Context,
    force: bool = typer.Option(False, "--force", help="Overwrite an existing config file"),
):
    """Write a config file holding every setting"""
    with exit_codes():
        path = ctx.obj["config"]
        if path.exists() and not force:
            _fail(EXIT_USAGE, f"{path} already exists (use --force to overwrite)")

        settings = load_settings(ctx)
        atomic_write_text(path, settings.to_config_text())

    console.print(Panel(
        escape(settings.to_config_text().rstrip()),
        title=f"Config written to {escape(str(path))}",
        border_style="green",
    ))


@app.command("dataset-gen")
def dataset_gen(
    ctx: typer.Context,
    rows: int = typer.Option(1500, "--rows", help="Number of records to generate"),
    out: Optional[Path] = typer.Option(None, "--out", help="Target file (default: dataset_path)"),
):
    """Generate the synthetic car evaluation dataset"""
    with exit_codes():
        if rows < 1:
            _fail(EXIT_USAGE, f"--rows must be at least 1, got {rows}")
        settings = load_settings(ctx)
        path = out or settings.dataset_path
        write_car_dataset(generate_car_records(settings.seed, rows), path)

    console.print(f"[green]Wrote {rows} rows to {escape(str(path))}[/green]")


@app.command()
def train(
    ctx: typer.Context,
    supervised_only: bool = typer.Option(
        False, "--supervised-only", help="Skip EM and fit on labeled documents only"),
    unlabeled_weight: Optional[float] = typer.Option(
        None, "--lambda", help="Weight of unlabeled documents in [0, 1]"),
    alpha: Optional[float] = typer.Option(None, "--alpha", help="Smoothing pseudo-count"),
    labeled_size: Optional[int] = typer.Option(
        None, "--labeled-size", help="Train records that keep their labels"),
    max_iterations: Optional[int] = typer.Option(None, "--max-iterations"),
    tolerance: Optional[float] = typer.Option(None, "--tolerance"),
    dataset: Optional[Path] = typer.Option(None, "--dataset", help="Dataset CSV"),
):
    """Train on the dataset and save model, registry and EM trace"""
    with exit_codes():
        # Same key as the config file so the flag takes precedence
        settings = load_settings(
            ctx,
            **{"lambda": unlabeled_weight},
            alpha=alpha,
            labeled_size=labeled_size,
            max_iterations=max_iterations,
            tolerance=tolerance,
            dataset_path=dataset,
        )
        model, trace = workflow.train(settings, supervised_only=supervised_only)

    mode = "supervised" if supervised_only else "semi-supervised"
    console.print(
        f"[green]Trained {mode} model[/green]: {len(model.classes)} classes, "
        f"{len(model.vocab)} words, {trace.iterations} EM iterations, "
        f"objective {trace.objectives[-1]:.6f}")
    console.print(f"Model: {escape(str(settings.model_path))}")
    console.print(f"Trace: {escape(str(settings.trace_path))}")


@app.command()
def classify(
    ctx: typer.Context,
    documents: List[Path] = typer.Argument(..., help="Documents to classify (.txt)"),
    model: Optional[Path] = typer.Option(None, "--model", help="Model file (default: output_dir)"),
    spawn: bool = typer.Option(False, "--spawn", help="Create a new class for a Novel document"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Also print matched word sets"),
    threshold: Optional[float] = typer.Option(None, "--threshold", help="Novelty threshold"),
):
    """Check format and domain, then classify each document or flag it as Novel"""
    with exit_codes():
        settings = load_settings(ctx, novelty_threshold=threshold)
        outcomes = workflow.classify_many(
            settings, documents, model_path=model, spawn=spawn, verbose=verbose)

    for outcome in outcomes:
        print_outcome(outcome)


def print_outcome(outcome: workflow.ClassifyOutcome) -> None:
    console.print(outcome.report_line(), markup=False, highlight=False, soft_wrap=True)

    if outcome.decision.out_of_range_attributes:
        attrs = ", ".join(outcome.decision.out_of_range_attributes)
        console.print(f"[yellow]out of range:[/yellow] {escape(attrs)}")
    if outcome.spawned_class:
        console.print(f"[magenta]spawned class {escape(outcome.spawned_class)}[/magenta]")
    for match in outcome.matches:
        words = ", ".join(
            f"{word}={match.probabilities[word]:.4f}" for word in sorted(match.words))
        console.print(f"  {escape(match.class_name)}: {escape(words)}", highlight=False)


@app.command()
def evaluate(
    ctx: typer.Context,
    model: Optional[Path] = typer.Option(None, "--model", help="Model file (default: output_dir)"),
):
    """Score the model on the test half and write the metrics CSV"""
    with exit_codes():
        settings = load_settings(ctx)
        result = workflow.evaluate_model(settings, model_path=model)

    table = Table(title="Evaluation")
    table.add_column("class")
    table.add_column("precision", justify="right")
    table.add_column("recall", justify="right")
    table.add_column("f1", justify="right")
    for name, scores in result.per_class.items():
        table.add_row(
            escape(name),
            f"{scores.precision:.4f}",
            f"{scores.recall:.4f}",
            f"{scores.f1:.4f}",
        )
    table.add_row(
        "macro",
        f"{result.macro_precision:.4f}",
        f"{result.macro_recall:.4f}",
        f"{result.macro_f1:.4f}",
        style="bold",
    )
    console.print(table)
    console.print(f"accuracy {result.accuracy:.4f}")
    console.print(f"Metrics: {escape(str(settings.metrics_path))}")


def _parse_sizes(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise typer.BadParameter(f"expected comma-separated integers, got {text!r}") from None


@app.command()
def compare(
    ctx: typer.Context,
    sizes: str = typer.Option(
        ",".join(str(n) for n in workflow.DEFAULT_SIZES),
        "--sizes",
        help="Comma-separated labeled-set sizes, ascending",
    ),
):
    """Compare supervised and semi-supervised training over labeled-set sizes"""
    ladder = _parse_sizes(sizes)
    with exit_codes():
        settings = load_settings(ctx)
        result = workflow.compare(settings, ladder)

    table = Table(title="Supervised vs semi-supervised")
    for column in ("n", "acc sup", "acc semi", "f1 sup", "f1 semi"):
        table.add_column(column, justify="right")
    for row in result.rows:
        table.add_row(
            str(row.n),
            f"{row.accuracy_supervised:.4f}",
            f"{row.accuracy_semisupervised:.4f}",
            f"{row.f1_supervised:.4f}",
            f"{row.f1_semisupervised:.4f}",
        )
    console.print(table)
    console.print(f"Comparison: {escape(str(settings.comparison_path))}")


def main():
    app()


if __name__ == "__main__":
    main()

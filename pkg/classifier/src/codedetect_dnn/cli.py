"""CLI: train the first domain, add new lengths, compare against the LRT."""

from __future__ import annotations

import click

from .data import BitSequenceDataset, read_records
from .evaluate import evaluate_vs_lrt, read_lrt_decisions, write_comparison_csv
from .io import load_checkpoint, save_checkpoint
from .model import DomainRegistry, LengthAdaptiveClassifier
from .training import TrainConfig, add_domain, train_domain


def _train_config(**kwargs) -> TrainConfig:
    return TrainConfig(
        learning_rate=kwargs["lr"],
        epochs=kwargs["epochs"],
        batch_size=kwargs["batch_size"],
        distill_weight=kwargs["lambda_d"],
        distill_temperature=kwargs["temperature"],
        seed=kwargs["seed"],
    )


def _train_options(fn):
    for opt in (
        click.option("--lr", type=float, default=1e-3, show_default=True),
        click.option("--epochs", type=int, default=6, show_default=True),
        click.option("--batch-size", type=int, default=256, show_default=True),
        click.option("--lambda-d", type=float, default=1.0, show_default=True,
                     help="distillation weight"),
        click.option("--temperature", type=float, default=2.0, show_default=True),
        click.option("--seed", type=int, default=0, show_default=True),
    ):
        fn = opt(fn)
    return fn


@click.group()
def main():
    """Neural classifier for convolutional code detection datasets."""


@main.command()
@click.option("--train", "train_path", required=True, help="JSON-lines training data")
@click.option("--test", "test_path", default=None, help="held-out data of the same length")
@click.option("--model", "model_path", required=True, help="checkpoint to write")
@_train_options
def train(train_path, test_path, model_path, **kwargs):
    """Train the first length domain from scratch."""
    model = LengthAdaptiveClassifier()
    registry = DomainRegistry()
    train_set = BitSequenceDataset(read_records(train_path))
    val_set = BitSequenceDataset(read_records(test_path)) if test_path else None
    report = train_domain(train_set, model, registry, _train_config(**kwargs), val_set=val_set)
    save_checkpoint(model, registry, model_path)
    click.echo(
        f"domain L={report.length}: train acc {report.train_accuracy:.4f}"
        + (f", val acc {report.val_accuracy:.4f}" if report.val_accuracy is not None else "")
    )


@main.command("add-domain")
@click.option("--model", "model_path", required=True, help="checkpoint to update")
@click.option("--train", "train_path", required=True, help="new-length training data")
@click.option("--test", "test_path", default=None)
@click.option("--prior", "prior_paths", multiple=True,
              help="held-out sets of already-trained lengths (repeatable)")
@click.option("--out", "out_path", required=True, help="updated checkpoint")
@_train_options
def add_domain_cmd(model_path, train_path, test_path, prior_paths, out_path, **kwargs):
    """Add a new codeword length, reporting forgetting on prior domains."""
    model, registry = load_checkpoint(model_path)
    train_set = BitSequenceDataset(read_records(train_path))
    val_set = BitSequenceDataset(read_records(test_path)) if test_path else None
    priors = {}
    for path in prior_paths:
        ds = BitSequenceDataset(read_records(path))
        priors[ds.length] = ds
    report = add_domain(train_set, model, registry, _train_config(**kwargs), priors, val_set=val_set)
    save_checkpoint(model, registry, out_path)
    new = report.new_domain
    click.echo(
        f"domain L={new.length}: train acc {new.train_accuracy:.4f}"
        + (f", val acc {new.val_accuracy:.4f}" if new.val_accuracy is not None else "")
    )
    for length in report.accuracy_before:
        click.echo(
            f"prior L={length}: {report.accuracy_before[length]:.4f} -> "
            f"{report.accuracy_after[length]:.4f} (drop {report.drop(length) * 100:.2f}pp)"
        )


@main.command()
@click.option("--model", "model_path", required=True)
@click.option("--test", "test_path", required=True, help="JSON-lines test data")
@click.option("--lrt", "lrt_path", required=True,
              help="JSON-lines output of `codedetect detect --dataset` on the same file")
@click.option("--out", "out_path", required=True, help="comparison CSV")
def evaluate(model_path, test_path, lrt_path, out_path):
    """Per-(N, eps) accuracy table: classifier vs likelihood ratio test."""
    model, registry = load_checkpoint(model_path)
    rows = evaluate_vs_lrt(
        model, registry, read_records(test_path), read_lrt_decisions(lrt_path)
    )
    write_comparison_csv(rows, out_path)
    for r in rows:
        click.echo(f"{r.pair} eps={r.eps} N={r.n_steps}: dnn {r.acc_dnn:.4f} lrt {r.acc_lrt:.4f}")


if __name__ == "__main__":
    main()

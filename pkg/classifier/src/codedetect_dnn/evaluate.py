"""Per-cell accuracy comparison between the classifier and the LRT.

The LRT side comes from `codedetect detect --dataset ... --out lrt.jsonl`
run on the exact same test file, one output line per input line.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

from .data import BitSequenceDataset, CellKey, split_by_cell
from .model import DomainRegistry, LengthAdaptiveClassifier
from .training import evaluate_accuracy

__all__ = ["ComparisonRow", "read_lrt_decisions", "evaluate_vs_lrt", "write_comparison_csv"]

CSV_COLUMNS = ("pair", "eps", "N", "acc_dnn", "acc_lrt")


@dataclass(frozen=True)
class ComparisonRow:
    pair: str
    eps: float
    n_steps: int
    acc_dnn: float
    acc_lrt: float


def read_lrt_decisions(path) -> list[dict]:
    try:
        with open(path) as fh:
            rows = [json.loads(line) for line in fh if line.strip()]
    except FileNotFoundError:
        raise FileNotFoundError(
            f"missing LRT output {path}; produce it with: codedetect detect --dataset ... --out {path}"
        )
    for row in rows:
        if "decision" not in row:
            raise ValueError(f"{path}: not a detect output file")
    return rows


def evaluate_vs_lrt(
    model: LengthAdaptiveClassifier,
    registry: DomainRegistry,
    test_records: list[dict],
    lrt_rows: list[dict],
) -> list[ComparisonRow]:
    if len(test_records) != len(lrt_rows):
        raise ValueError(
            f"test set has {len(test_records)} records but the LRT output has {len(lrt_rows)}"
        )
    cells = split_by_cell(test_records)
    lrt_by_cell: dict[CellKey, list[bool]] = {k: [] for k in cells}
    for rec, lrt in zip(test_records, lrt_rows):
        key = CellKey(pair=rec["pair"], eps=float(rec["eps"]), n_steps=int(rec["n_steps"]))
        predicted = 0 if lrt["decision"] == "H1" else 1
        lrt_by_cell[key].append(predicted == rec["label"])
    rows = []
    for key in sorted(cells, key=lambda k: (k.pair, k.eps, k.n_steps)):
        dataset = BitSequenceDataset(cells[key])
        hits = lrt_by_cell[key]
        rows.append(
            ComparisonRow(
                pair=key.pair,
                eps=key.eps,
                n_steps=key.n_steps,
                acc_dnn=evaluate_accuracy(model, registry, dataset),
                acc_lrt=sum(hits) / len(hits),
            )
        )
    return rows


def write_comparison_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow([r.pair, r.eps, r.n_steps, r.acc_dnn, r.acc_lrt])

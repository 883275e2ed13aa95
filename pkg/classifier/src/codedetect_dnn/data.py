"""JSON-lines datasets produced by `codedetect export-dataset`.

Each line carries: bits (list of 0/1), label (0|1), n_steps, eps, pair,
seed.  Bits map to +/-1 floats (zero-mean inputs suit the normalization
layers); tensors are shaped (batch, 1, length).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import torch
from torch.utils.data import Dataset

REQUIRED_FIELDS = ("bits", "label", "n_steps", "eps", "pair", "seed")


@dataclass(frozen=True)
class CellKey:
    """One (pair, eps, sequence length) grid cell."""

    pair: str
    eps: float
    n_steps: int


def read_records(path) -> list[dict]:
    records = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            missing = [f for f in REQUIRED_FIELDS if f not in rec]
            if missing:
                raise ValueError(f"{path}:{lineno}: missing fields {missing}")
            if rec["label"] not in (0, 1):
                raise ValueError(f"{path}:{lineno}: label must be 0 or 1")
            records.append(rec)
    if not records:
        raise ValueError(f"{path}: empty dataset")
    return records


def bits_to_tensor(bits_rows) -> torch.Tensor:
    x = np.asarray(bits_rows, dtype=np.float32)
    return torch.from_numpy(1.0 - 2.0 * x).unsqueeze(1)  # 0 -> +1, 1 -> -1


class BitSequenceDataset(Dataset):
    """Fixed-length slice of a dataset; rejects mixed lengths."""

    def __init__(self, records: list[dict]):
        lengths = {len(r["bits"]) for r in records}
        if len(lengths) != 1:
            raise ValueError(f"mixed sequence lengths in one dataset: {sorted(lengths)}")
        self.length = lengths.pop()
        self.x = bits_to_tensor([r["bits"] for r in records])
        self.y = torch.tensor([r["label"] for r in records], dtype=torch.long)

    def __len__(self):
        return self.y.shape[0]

    def __getitem__(self, idx):
        return self.x[idx], self.y[idx]

    def class_balance(self) -> float:
        """Fraction of label-1 samples."""
        return float(self.y.float().mean())


def split_by_cell(records: list[dict]) -> dict[CellKey, list[dict]]:
    cells: dict[CellKey, list[dict]] = {}
    for r in records:
        key = CellKey(pair=r["pair"], eps=float(r["eps"]), n_steps=int(r["n_steps"]))
        cells.setdefault(key, []).append(r)
    return cells

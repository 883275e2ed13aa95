"""Monte Carlo error-probability sweeps over (code pair, epsilon, N) grids.

Every trial owns a counter-based RNG stream derived from (master seed, cell
index, trial index), so results are bit-identical for any worker count and
any scheduling; records are emitted in a canonical order and the CSV writer
suppresses wall-clock times unless explicitly asked, keeping output files
byte-reproducible.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import RngStream
from .codes import ConvCode, _bits_to_words, _encode_words, _words_to_bits, parse_octal_generators
from .detector import _decide_batch

__all__ = [
    "ExperimentConfig",
    "ExperimentRecord",
    "run_montecarlo",
    "export_dataset",
    "estimate_empirical_exponent",
    "wilson_interval",
    "write_records_csv",
    "config_from_dict",
]

CSV_COLUMNS = ("pair", "eps", "N", "trials", "errors", "p_err", "ci_half", "underflows", "wall_ms")

# spawn-path namespaces keeping Monte Carlo and dataset-export streams disjoint
_NS_MONTECARLO = 0
_NS_DATASET = 1


@dataclass(frozen=True)
class ExperimentConfig:
    code_pair: tuple[ConvCode, ConvCode]
    epsilon_grid: tuple[float, ...]
    n_grid: tuple[int, ...]
    trials: int
    seed: int
    mode: str = "scaled"
    tau: float = 1.0
    pair_label: str | None = None

    def __post_init__(self):
        c1, c2 = self.code_pair
        if (c1.k, c1.n) != (c2.k, c2.n):
            raise ValueError("paired codes must share k and n")
        if not self.epsilon_grid or not self.n_grid:
            raise ValueError("epsilon and N grids must be non-empty")
        if any(not 0.0 <= e <= 0.5 for e in self.epsilon_grid):
            raise ValueError("every epsilon must be in [0, 0.5]")
        if any(n < 1 for n in self.n_grid):
            raise ValueError("every N must be at least 1")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if self.mode not in ("scaled", "unscaled"):
            raise ValueError(f"unknown detector mode {self.mode!r}")

    @property
    def label(self) -> str:
        if self.pair_label:
            return self.pair_label
        return f"{self.code_pair[0].describe()}|{self.code_pair[1].describe()}"

    def cells(self) -> list[tuple[int, float, int]]:
        """(cell id, epsilon, N) in grid order; ids are scheduling-independent."""
        grid = itertools.product(self.epsilon_grid, self.n_grid)
        return [(i, eps, n) for i, (eps, n) in enumerate(grid)]


@dataclass(frozen=True)
class ExperimentRecord:
    pair: str
    epsilon: float
    n_steps: int
    trials: int
    errors: int
    p_error_hat: float
    ci_half: float
    underflows: int
    wall_ms: float


def wilson_interval(errors: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    p_hat = errors / trials
    denom = 1.0 + z * z / trials
    center = (p_hat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p_hat * (1 - p_hat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _trial_draws(config: ExperimentConfig, cell_id: int, eps: float, n_steps: int):
    """Per-trial (truth, message bits, flip mask) from per-trial streams."""
    c1, _ = config.code_pair
    k, n = c1.k, c1.n
    truths = np.empty(config.trials, dtype=np.int8)
    msgs = np.empty((config.trials, n_steps * k), dtype=np.int8)
    flips = np.empty((config.trials, n_steps * n), dtype=bool)
    master = RngStream(config.seed)
    for i in range(config.trials):
        gen = master.spawn(_NS_MONTECARLO, cell_id, i).generator()
        truths[i] = gen.integers(0, 2)
        msgs[i] = gen.integers(0, 2, size=n_steps * k, dtype=np.int8)
        flips[i] = gen.random(n_steps * n) < eps
    return truths, msgs, flips


def _run_cell(config: ExperimentConfig, cell_id: int, eps: float, n_steps: int) -> ExperimentRecord:
    start = time.perf_counter()
    c1, c2 = config.code_pair
    truths, msgs, flips = _trial_draws(config, cell_id, eps, n_steps)
    clean_words = np.empty((config.trials, n_steps), dtype=np.int64)
    for label, code in ((0, c1), (1, c2)):
        idx = np.nonzero(truths == label)[0]
        if idx.size:
            clean_words[idx] = _encode_words(code, msgs[idx])
    rx_bits = _words_to_bits(clean_words, c1.n) ^ flips
    rx_words = _bits_to_words(rx_bits, c1.n)
    decisions, underflow = _decide_batch(c1, c2, rx_words, eps, tau=config.tau, mode=config.mode)
    errors = int((decisions != truths).sum())
    lo, hi = wilson_interval(errors, config.trials)
    return ExperimentRecord(
        pair=config.label,
        epsilon=eps,
        n_steps=n_steps,
        trials=config.trials,
        errors=errors,
        p_error_hat=errors / config.trials,
        ci_half=(hi - lo) / 2.0,
        underflows=int(underflow.sum()),
        wall_ms=(time.perf_counter() - start) * 1e3,
    )


def run_montecarlo(config: ExperimentConfig, workers: int = 1) -> list[ExperimentRecord]:
    """One record per (epsilon, N) cell, canonically sorted."""
    cells = config.cells()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(
                pool.map(_run_cell, *zip(*[(config, i, e, n) for i, e, n in cells]))
            )
    else:
        records = [_run_cell(config, i, e, n) for i, e, n in cells]
    return sorted(records, key=lambda r: (r.pair, r.epsilon, r.n_steps))


def write_records_csv(records, path, timing: bool = False) -> None:
    """Canonical CSV; wall_ms is zeroed unless `timing` so bytes are reproducible."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in sorted(records, key=lambda r: (r.pair, r.epsilon, r.n_steps)):
            writer.writerow(
                [
                    r.pair,
                    r.epsilon,
                    r.n_steps,
                    r.trials,
                    r.errors,
                    r.p_error_hat,
                    r.ci_half,
                    r.underflows,
                    round(r.wall_ms, 3) if timing else 0,
                ]
            )


def export_dataset(config: ExperimentConfig, count_per_class: int, path) -> int:
    """Write balanced labeled JSON lines; returns the number of records.

    Per cell and class, sample i comes from stream (seed, dataset-namespace,
    cell, class, i): re-exports are byte-identical and disjoint from the
    Monte Carlo streams.
    """
    if count_per_class < 1:
        raise ValueError("need at least one sample per class")
    c_by_label = {0: config.code_pair[0], 1: config.code_pair[1]}
    master = RngStream(config.seed)
    written = 0
    with open(path, "w") as fh:
        for cell_id, eps, n_steps in config.cells():
            for label in (0, 1):
                code = c_by_label[label]
                for i in range(count_per_class):
                    stream = master.spawn(_NS_DATASET, cell_id, label, i)
                    gen = stream.generator()
                    msg = gen.integers(0, 2, size=n_steps * code.k, dtype=np.int8)
                    clean = _words_to_bits(_encode_words(code, msg[None, :]), code.n)[0]
                    rx = clean ^ (gen.random(n_steps * code.n) < eps)
                    record = {
                        "bits": [int(b) for b in rx],
                        "label": label,
                        "n_steps": n_steps,
                        "eps": eps,
                        "pair": config.label,
                        "seed": int(
                            np.random.SeedSequence(
                                entropy=stream.seed, spawn_key=stream.path
                            ).generate_state(1, dtype=np.uint64)[0]
                        ),
                    }
                    fh.write(json.dumps(record) + "\n")
                    written += 1
    return written


def estimate_empirical_exponent(records) -> float:
    """Least-squares slope of -ln(p_err) against N at a common epsilon.

    Cells with zero observed errors carry no log information and are dropped
    with a warning.
    """
    records = list(records)
    if len({r.epsilon for r in records}) > 1:
        raise ValueError("records must share a single epsilon")
    usable = []
    for r in records:
        if r.errors == 0:
            warnings.warn(f"dropping N={r.n_steps}: zero errors in {r.trials} trials")
        else:
            usable.append(r)
    usable.sort(key=lambda r: r.n_steps)
    if len(usable) < 3:
        raise ValueError("need at least three cells with nonzero error counts")
    if len({r.n_steps for r in usable}) != len(usable):
        raise ValueError("records must have distinct N values")
    n = np.array([r.n_steps for r in usable], dtype=float)
    y = -np.log(np.array([r.p_error_hat for r in usable]))
    return float(np.polyfit(n, y, 1)[0])


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Build a config from the JSON layout used by the CLI.

    Codes are given as {"generators": ["5", "7"], "k": 1} (octal strings).
    """
    codes = []
    for spec in raw["code_pair"]:
        if int(spec.get("k", 1)) != 1:
            raise ValueError("octal code specs support k=1 only")
        codes.append(parse_octal_generators([str(g) for g in spec["generators"]]))
    return ExperimentConfig(
        code_pair=(codes[0], codes[1]),
        epsilon_grid=tuple(float(e) for e in raw["epsilon_grid"]),
        n_grid=tuple(int(n) for n in raw["N_grid"]),
        trials=int(raw.get("trials", 10_000)),
        seed=int(raw.get("seed", 0x5EED_C0DE)),
        mode=raw.get("mode", "scaled"),
        tau=float(raw.get("tau", 1.0)),
        pair_label=raw.get("pair_label"),
    )

"""Command line interface: detect, exponent, montecarlo, export-dataset, matrix-dump."""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from .channel import DEFAULT_SEED
from .codes import parse_octal_generators, validate_assumptions
from .detector import lrt_decide
from .exponent import error_exponent, lower_bound_theorem1
from .harness import (
    ExperimentConfig,
    config_from_dict,
    export_dataset,
    run_montecarlo,
    write_records_csv,
)
from .markov import (
    closed_form_p,
    noise_free_transition,
    noisy_transition_exact,
    noisy_transition_factored,
)


def _code(text: str):
    return parse_octal_generators([p for p in text.split(",") if p.strip()])


def _read_bits(path: str, nbits: int | None) -> np.ndarray:
    """Bit file: a string of 0/1 characters, or hex digits (4 bits each, MSB
    first); `nbits` trims hex padding.  '-' reads stdin."""
    text = sys.stdin.read() if path == "-" else open(path).read()
    compact = "".join(text.split())
    if not compact:
        raise click.ClickException("no bits found in input")
    if set(compact) <= {"0", "1"}:
        bits = [int(c) for c in compact]
    else:
        try:
            bits = [int(b) for c in compact for b in format(int(c, 16), "04b")]
        except ValueError:
            raise click.ClickException(f"input is neither binary nor hex: {compact[:16]!r}...")
    if nbits is not None:
        if nbits > len(bits):
            raise click.ClickException(f"--nbits {nbits} exceeds available {len(bits)} bits")
        bits = bits[:nbits]
    return np.array(bits, dtype=np.int8)


def _emit(payload, out: str | None) -> None:
    text = json.dumps(payload)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


@click.group()
def main():
    """Decide which of two convolutional codes produced a noisy bit stream."""


@main.command()
@click.option("--code1", required=True, help="octal generators, e.g. 5,7")
@click.option("--code2", required=True, help="octal generators, e.g. 4,5")
@click.option("--eps", type=float, required=True, help="BSC crossover probability")
@click.option("--tau", type=float, default=1.0, show_default=True)
@click.option("--mode", type=click.Choice(["scaled", "unscaled"]), default="scaled")
@click.option("--bits", "bits_path", help="bit/hex file, or - for stdin")
@click.option("--nbits", type=int, default=None, help="bit count when input is hex")
@click.option("--dataset", "dataset_path", help="JSON-lines dataset to classify in bulk")
@click.option("--out", default=None, help="write JSON here instead of stdout")
def detect(code1, code2, eps, tau, mode, bits_path, nbits, dataset_path, out):
    """Run the likelihood ratio test on one sequence or a whole dataset."""
    c1, c2 = _code(code1), _code(code2)
    if (bits_path is None) == (dataset_path is None):
        raise click.ClickException("give exactly one of --bits or --dataset")
    if bits_path is not None:
        result = lrt_decide(c1, c2, _read_bits(bits_path, nbits), eps, tau=tau, mode=mode)
        _emit(
            {
                "decision": result.decision,
                "logL1": result.log_likelihood_h1,
                "logL2": result.log_likelihood_h2,
                "logRatio": result.log_ratio,
            },
            out,
        )
        return
    sink = open(out, "w") if out else sys.stdout
    try:
        for line in open(dataset_path):
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            result = lrt_decide(c1, c2, np.array(record["bits"], dtype=np.int8), eps, tau=tau, mode=mode)
            payload = {
                "decision": result.decision,
                "logL1": result.log_likelihood_h1,
                "logL2": result.log_likelihood_h2,
                "logRatio": result.log_ratio,
            }
            if "label" in record:
                payload["label"] = record["label"]
            sink.write(json.dumps(payload) + "\n")
    finally:
        if out:
            sink.close()


@main.command()
@click.option("--code1", required=True)
@click.option("--code2", required=True)
@click.option("--eps", type=float, required=True)
@click.option("--delta", type=float, default=1e-6, show_default=True)
@click.option(
    "--construction",
    type=click.Choice(["exact", "factored"]),
    default="exact",
    show_default=True,
)
@click.option("--out", default=None)
def exponent(code1, code2, eps, delta, construction, out):
    """Error exponent of the LRT between the two noisy output-state chains."""
    c1, c2 = _code(code1), _code(code2)
    build = noisy_transition_exact if construction == "exact" else noisy_transition_factored
    p1, p2 = build(c1, eps), build(c2, eps)
    bound = None
    if validate_assumptions(c1).is_analysis_eligible and validate_assumptions(c2).is_analysis_eligible:
        bound = lower_bound_theorem1(closed_form_p(c1, eps).p, closed_form_p(c2, eps).p)
    result = error_exponent(p1, p2, delta=delta, theorem1_bound=bound)
    _emit(
        {
            "uStar": result.u_star,
            "lambdaStar": result.lambda_star,
            "iErr": result.i_err,
            "theorem1Bound": result.theorem1_bound,
            "rowBound": result.row_bound,
            "iterations": result.iterations,
        },
        out,
    )


DEFAULT_EPS_GRID = "0.05,0.1,0.15,0.2"
DEFAULT_N_GRID = "25,50,100,200,400"


def _config_from_options(config, code1, code2, eps_grid, n_grid, trials, seed, mode, tau):
    if config:
        raw = json.load(open(config))
        if trials is not None:
            raw["trials"] = trials
        if seed is not None:
            raw["seed"] = seed
        if mode:
            raw["mode"] = mode
        return config_from_dict(raw)
    if not (code1 and code2):
        raise click.ClickException("either --config or --code1/--code2")
    return ExperimentConfig(
        code_pair=(_code(code1), _code(code2)),
        epsilon_grid=tuple(float(e) for e in (eps_grid or DEFAULT_EPS_GRID).split(",")),
        n_grid=tuple(int(n) for n in (n_grid or DEFAULT_N_GRID).split(",")),
        trials=trials if trials is not None else 10_000,
        seed=seed if seed is not None else DEFAULT_SEED,
        mode=mode or "scaled",
        tau=tau,
    )


@main.command()
@click.option("--config", default=None, help="JSON experiment config")
@click.option("--code1", default=None)
@click.option("--code2", default=None)
@click.option("--eps-grid", default=None, help=f"comma list [default: {DEFAULT_EPS_GRID}]")
@click.option("--n-grid", default=None, help=f"comma list [default: {DEFAULT_N_GRID}]")
@click.option("--trials", type=int, default=None)
@click.option("--seed", type=int, default=None, help=f"default {DEFAULT_SEED}")
@click.option("--mode", type=click.Choice(["scaled", "unscaled"]), default=None)
@click.option("--tau", type=float, default=1.0)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--timing", is_flag=True, help="record wall-clock ms (breaks byte reproducibility)")
@click.option("--out", required=True)
def montecarlo(config, code1, code2, eps_grid, n_grid, trials, seed, mode, tau, workers, timing, out):
    """Sweep the experiment grid and write one CSV row per cell."""
    cfg = _config_from_options(config, code1, code2, eps_grid, n_grid, trials, seed, mode, tau)
    records = run_montecarlo(cfg, workers=workers)
    write_records_csv(records, out, timing=timing)
    click.echo(f"wrote {len(records)} cells to {out}")


@main.command("export-dataset")
@click.option("--config", default=None)
@click.option("--code1", default=None)
@click.option("--code2", default=None)
@click.option("--eps", type=float, default=None)
@click.option("--n", "n_steps", type=int, default=None)
@click.option("--count", type=int, required=True, help="samples per class per cell")
@click.option("--seed", type=int, default=None)
@click.option("--out", required=True)
def export_dataset_cmd(config, code1, code2, eps, n_steps, count, seed, out):
    """Write a balanced labeled JSON-lines dataset for classifier training."""
    if config:
        cfg = _config_from_options(config, None, None, None, None, None, seed, None, 1.0)
    else:
        if not (code1 and code2 and eps is not None and n_steps):
            raise click.ClickException("either --config or --code1/--code2/--eps/--n")
        cfg = ExperimentConfig(
            code_pair=(_code(code1), _code(code2)),
            epsilon_grid=(eps,),
            n_grid=(n_steps,),
            trials=1,
            seed=seed if seed is not None else DEFAULT_SEED,
        )
    written = export_dataset(cfg, count, out)
    click.echo(f"wrote {written} records to {out}")


@main.command("matrix-dump")
@click.option("--code", required=True, help="octal generators, e.g. 5,7")
@click.option("--eps", type=float, default=None, help="omit for the noise-free chain")
@click.option(
    "--construction",
    type=click.Choice(["clean", "exact", "factored"]),
    default=None,
    help="default: clean without --eps, exact with it",
)
@click.option("--out", required=True)
def matrix_dump(code, eps, construction, out):
    """Export a transition matrix as CSV triplets (row, col, prob)."""
    c = _code(code)
    if construction is None:
        construction = "clean" if eps is None else "exact"
    if construction == "clean":
        matrix = noise_free_transition(c)
    else:
        if eps is None:
            raise click.ClickException(f"--eps is required for the {construction} construction")
        build = noisy_transition_exact if construction == "exact" else noisy_transition_factored
        matrix = build(c, eps)
    with open(out, "w") as fh:
        fh.write("row,col,prob\n")
        for i, j, p in matrix.entries():
            fh.write(f"{i},{j},{p}\n")
    click.echo(f"wrote {sum(len(r) for r in matrix.rows.values())} entries to {out}")


if __name__ == "__main__":
    main()

import subprocess

import pytest

from codedetect_dnn import BitSequenceDataset, read_records


def export(path, n_steps, count, seed, eps=0.1, code1="5,7", code2="4,5"):
    """Produce a dataset through the primary CLI (the only interface we use)."""
    subprocess.run(
        [
            "codedetect", "export-dataset",
            "--code1", code1, "--code2", code2,
            "--eps", str(eps), "--n", str(n_steps),
            "--count", str(count), "--seed", str(seed),
            "--out", str(path),
        ],
        check=True,
        capture_output=True,
    )
    return path


def lrt_decisions(dataset_path, out_path, eps=0.1, code1="5,7", code2="4,5"):
    subprocess.run(
        [
            "codedetect", "detect",
            "--code1", code1, "--code2", code2, "--eps", str(eps),
            "--dataset", str(dataset_path), "--out", str(out_path),
        ],
        check=True,
        capture_output=True,
    )
    return out_path


@pytest.fixture(scope="session")
def tiny_sets(tmp_path_factory):
    """Small N=16 train/test pair for fast unit tests."""
    root = tmp_path_factory.mktemp("tiny")
    train = export(root / "train.jsonl", n_steps=16, count=600, seed=201)
    test = export(root / "test.jsonl", n_steps=16, count=200, seed=202)
    return BitSequenceDataset(read_records(train)), BitSequenceDataset(read_records(test))

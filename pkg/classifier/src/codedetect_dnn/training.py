"""Domain-incremental training: one domain per codeword length.

New lengths get fresh normalization parameters; the shared trunk is kept
compatible with earlier lengths by a distillation penalty that matches the
frozen teacher's softened outputs on the new data, averaged over every
prior domain's normalization route (prior routes run with frozen running
statistics, so the penalty sees trunk drift and nothing else).
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

import torch
from torch import nn
from torch.utils.data import DataLoader

from .data import BitSequenceDataset
from .model import DomainRegistry, LengthAdaptiveClassifier

__all__ = ["TrainConfig", "TrainReport", "ForgettingReport", "train_domain", "add_domain", "evaluate_accuracy"]


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    epochs: int = 6
    batch_size: int = 256
    distill_weight: float = 1.0  # lambda_d
    distill_temperature: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if self.distill_weight < 0:
            raise ValueError("distillation weight must be non-negative")
        if self.distill_temperature <= 0:
            raise ValueError("distillation temperature must be positive")


@dataclass
class TrainReport:
    length: int
    epoch_losses: list[float]
    train_accuracy: float
    val_accuracy: float | None = None


@dataclass
class ForgettingReport:
    new_domain: TrainReport
    accuracy_before: dict[int, float] = field(default_factory=dict)
    accuracy_after: dict[int, float] = field(default_factory=dict)

    def drop(self, length: int) -> float:
        return self.accuracy_before[length] - self.accuracy_after[length]

    def worst_drop(self) -> float:
        return max(self.drop(l) for l in self.accuracy_before) if self.accuracy_before else 0.0


@torch.no_grad()
def evaluate_accuracy(
    model: LengthAdaptiveClassifier, registry: DomainRegistry, dataset: BitSequenceDataset
) -> float:
    model.eval()
    key = registry.key(dataset.length)
    correct = 0
    for lo in range(0, len(dataset), 1024):
        x = dataset.x[lo : lo + 1024]
        y = dataset.y[lo : lo + 1024]
        correct += int((model(x, key).argmax(dim=1) == y).sum())
    return correct / len(dataset)


def _check_balance(dataset: BitSequenceDataset) -> None:
    if abs(dataset.class_balance() - 0.5) > 0.05:
        raise ValueError("training labels must be balanced within 10%")


def train_domain(
    train_set: BitSequenceDataset,
    model: LengthAdaptiveClassifier,
    registry: DomainRegistry,
    config: TrainConfig,
    val_set: BitSequenceDataset | None = None,
) -> TrainReport:
    """Train one length domain; distills against prior domains if any exist."""
    if len(train_set) == 0:
        raise ValueError("empty training set")
    _check_balance(train_set)
    torch.manual_seed(config.seed)
    torch.use_deterministic_algorithms(True)

    length = train_set.length
    if length not in registry:
        model.add_norm_set(registry.register(length))
    key = registry.key(length)

    prior_lengths = [l for l in registry.lengths if l != length]
    teacher = None
    anchor_keys: list[str] = []
    if prior_lengths and config.distill_weight > 0:
        teacher = copy.deepcopy(model)
        teacher.eval()
        for p in teacher.parameters():
            p.requires_grad_(False)
        anchor_keys = [registry.key(l) for l in prior_lengths]

    loader = DataLoader(
        train_set,
        batch_size=config.batch_size,
        shuffle=True,
        generator=torch.Generator().manual_seed(config.seed),
    )
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    ce = nn.CrossEntropyLoss()
    kl = nn.KLDivLoss(reduction="batchmean")
    temp = config.distill_temperature

    epoch_losses = []
    for _ in range(config.epochs):
        model.train()
        for other in registry.lengths:
            if other != length:
                model.set_norm_mode(registry.key(other), False)  # freeze running stats
        total, seen = 0.0, 0
        for x, y in loader:
            optimizer.zero_grad()
            loss = ce(model(x, key), y)
            if teacher is not None:
                distill = 0.0
                for anchor in anchor_keys:
                    with torch.no_grad():
                        soft_targets = torch.softmax(teacher(x, anchor) / temp, dim=1)
                    student = torch.log_softmax(model(x, anchor) / temp, dim=1)
                    distill = distill + kl(student, soft_targets)
                loss = loss + config.distill_weight * temp**2 * distill / len(anchor_keys)
            loss.backward()
            optimizer.step()
            total += float(loss.detach()) * y.shape[0]
            seen += y.shape[0]
        epoch_losses.append(total / seen)

    return TrainReport(
        length=length,
        epoch_losses=epoch_losses,
        train_accuracy=evaluate_accuracy(model, registry, train_set),
        val_accuracy=evaluate_accuracy(model, registry, val_set) if val_set else None,
    )


def add_domain(
    train_set: BitSequenceDataset,
    model: LengthAdaptiveClassifier,
    registry: DomainRegistry,
    config: TrainConfig,
    prior_eval_sets: dict[int, BitSequenceDataset],
    val_set: BitSequenceDataset | None = None,
) -> ForgettingReport:
    """Add a new length and report accuracy on every prior domain before/after."""
    if len(registry) == 0:
        raise ValueError("no trained domains yet; use train_domain for the first one")
    if train_set.length in registry:
        raise ValueError(
            f"length {train_set.length} is already registered; use train_domain to refresh"
        )
    for length in prior_eval_sets:
        if length not in registry:
            raise ValueError(f"held-out set for unregistered length {length}")
    before = {l: evaluate_accuracy(model, registry, ds) for l, ds in prior_eval_sets.items()}
    report = train_domain(train_set, model, registry, config, val_set=val_set)
    after = {l: evaluate_accuracy(model, registry, ds) for l, ds in prior_eval_sets.items()}
    return ForgettingReport(new_domain=report, accuracy_before=before, accuracy_after=after)

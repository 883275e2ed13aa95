"""Checkpoint save/load: model weights plus the domain registry and config."""

from __future__ import annotations

from dataclasses import asdict

import torch

from .model import DomainRegistry, LengthAdaptiveClassifier, ModelConfig

__all__ = ["save_checkpoint", "load_checkpoint"]


def save_checkpoint(model: LengthAdaptiveClassifier, registry: DomainRegistry, path) -> None:
    torch.save(
        {
            "config": asdict(model.config),
            "lengths": list(registry.lengths),
            "state": model.state_dict(),
        },
        path,
    )


def load_checkpoint(path) -> tuple[LengthAdaptiveClassifier, DomainRegistry]:
    payload = torch.load(path, weights_only=True)
    config = ModelConfig(**{**payload["config"], "channels": tuple(payload["config"]["channels"])})
    model = LengthAdaptiveClassifier(config)
    registry = DomainRegistry()
    for length in payload["lengths"]:
        model.add_norm_set(registry.register(int(length)))
    model.load_state_dict(payload["state"])
    return model, registry

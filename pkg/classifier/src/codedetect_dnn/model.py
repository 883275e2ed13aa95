"""Length-adaptive classifier: shared convolutional trunk, one batch-norm
set per registered sequence length, global average pooling, linear head.

The trunk is fully convolutional so any length passes through any
normalization set mechanically; the per-length sets exist to absorb the
statistical differences between lengths while the trunk stays universal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import torch
from torch import nn


@dataclass(frozen=True)
class ModelConfig:
    blocks: int = 3
    channels: tuple[int, ...] = (32, 64, 64)
    kernel_size: int = 5
    pooling: str = "avg"  # global pooling before the head: "avg" | "max"
    head_width: int = 0  # 0 = plain linear head
    classes: int = 2

    def __post_init__(self):
        if self.classes != 2:
            raise ValueError("this classifier is strictly binary")
        if len(self.channels) != self.blocks:
            raise ValueError("need one channel count per block")
        if self.pooling not in ("avg", "max"):
            raise ValueError(f"unknown pooling {self.pooling!r}")


@dataclass
class DomainRegistry:
    """Maps a codeword length to its normalization-set key, in insertion order."""

    lengths: list[int] = field(default_factory=list)

    def register(self, length: int) -> str:
        if length in self.lengths:
            raise ValueError(f"length {length} is already registered")
        self.lengths.append(length)
        return self.key(length)

    def key(self, length: int) -> str:
        if length not in self.lengths:
            raise KeyError(f"length {length} is not registered")
        return str(length)

    def latest(self) -> int:
        if not self.lengths:
            raise KeyError("no domains registered")
        return self.lengths[-1]

    def __contains__(self, length: int) -> bool:
        return length in self.lengths

    def __len__(self) -> int:
        return len(self.lengths)


class LengthAdaptiveClassifier(nn.Module):
    def __init__(self, config: ModelConfig | None = None):
        super().__init__()
        self.config = config or ModelConfig()
        cfg = self.config
        convs = []
        in_ch = 1
        for b, out_ch in enumerate(cfg.channels):
            stride = 1 if b == 0 else 2
            convs.append(
                nn.Conv1d(in_ch, out_ch, cfg.kernel_size, stride=stride,
                          padding=cfg.kernel_size // 2, bias=False)
            )
            in_ch = out_ch
        self.convs = nn.ModuleList(convs)
        self.norms = nn.ModuleDict()  # one ModuleList of BN layers per length key
        if cfg.head_width > 0:
            self.head = nn.Sequential(
                nn.Linear(cfg.channels[-1], cfg.head_width),
                nn.ReLU(),
                nn.Linear(cfg.head_width, cfg.classes),
            )
        else:
            self.head = nn.Linear(cfg.channels[-1], cfg.classes)

    def add_norm_set(self, key: str) -> None:
        if key in self.norms:
            raise ValueError(f"normalization set {key!r} already exists")
        self.norms[key] = nn.ModuleList(
            [nn.BatchNorm1d(ch) for ch in self.config.channels]
        )

    def set_norm_mode(self, key: str, training: bool) -> None:
        """Freeze or unfreeze the running statistics of one length's set."""
        self.norms[key].train(training)

    def forward(self, x: torch.Tensor, key: str) -> torch.Tensor:
        if key not in self.norms:
            raise KeyError(f"no normalization set for {key!r}")
        for conv, norm in zip(self.convs, self.norms[key]):
            x = torch.relu(norm(conv(x)))
        if self.config.pooling == "avg":
            x = x.mean(dim=2)
        else:
            x = x.amax(dim=2)
        return self.head(x)

    def shared_parameter_names(self) -> list[str]:
        return [n for n, _ in self.named_parameters() if not n.startswith("norms.")]

    def norm_parameter_names(self, key: str) -> list[str]:
        return [n for n, _ in self.named_parameters() if n.startswith(f"norms.{key}.")]

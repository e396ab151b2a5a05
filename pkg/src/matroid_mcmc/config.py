"""Chain configuration and step statistics shared by both walks."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

from .errors import ValidationError

DEFAULT_MIX_CONSTANT = 4.0


@dataclass
class ChainConfig:
    epsilon: float = 0.1
    mix_constant: float = DEFAULT_MIX_CONSTANT
    seed: int = 0
    step_override: int | None = None

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise ValidationError(f"epsilon must lie in (0,1), got {self.epsilon}")
        if not self.mix_constant > 0:
            raise ValidationError(f"mix_constant must be positive, got {self.mix_constant}")
        if self.step_override is not None and self.step_override < 1:
            raise ValidationError("step_override must be >= 1")

    def steps(self, n: int) -> int:
        """Transition count: step_override if set, else ceil(C * n * ln(n/eps))."""
        if self.step_override is not None:
            return self.step_override
        return math.ceil(self.mix_constant * n * math.log(n / self.epsilon))


@dataclass
class StepStats:
    proposals: int = 0
    rejections: int = 0
    steps: int = 0

    @property
    def rejection_rate(self) -> float:
        return self.rejections / self.proposals if self.proposals else 0.0

    def merge(self, other: "StepStats") -> None:
        self.proposals += other.proposals
        self.rejections += other.rejections
        self.steps += other.steps


def debug_asserts_enabled() -> bool:
    return os.environ.get("MATROID_MCMC_DEBUG_ASSERTS", "") == "1"

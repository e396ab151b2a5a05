"""Down-up walk on the lifted independent-set distribution.

State is (A, y_count): A the independent set on the real ground elements,
y_count the number of occupied auxiliary slots, |A| + y_count = n between
transitions.  One transition drops a uniform element of the combined state,
then re-adds by rejection sampling: auxiliary slots carry aggregate proposal
mass n - |T∩X| and are always accepted; element i carries mass λ_i and is
accepted iff it keeps A independent.  The stationary law of A is the target
weighted independent-set distribution.
"""
from __future__ import annotations

from .config import ChainConfig, StepStats, debug_asserts_enabled
from .errors import ValidationError
from .matroids import Fields, MatroidSpec, build_oracle
from .rng import SeedStream
from .weighted_index import WeightedIndex


class PolarizedChain:
    def __init__(self, spec: MatroidSpec, fields: Fields, cfg: ChainConfig,
                 dyncon_backend: str = "auto"):
        if len(fields) != spec.n:
            raise ValidationError(
                f"fields length {len(fields)} != ground set size {spec.n}")
        self.spec = spec
        self.fields = fields
        self.cfg = cfg
        self.n = spec.n
        self.oracle = build_oracle(spec, "independence", dyncon_backend)
        self.A: list[int] = []
        self.in_A = [False] * spec.n
        self.y_count = spec.n
        # every element outside A stays proposable at weight λ_i, loops included
        self.widx = WeightedIndex(fields.lam)
        self.rng = SeedStream(cfg.seed)
        self.stats = StepStats()
        self._debug = debug_asserts_enabled()

    def down_step(self) -> str:
        """Drop a uniform element of the lifted state; returns "y" or "x"."""
        t = self.rng.u() * self.n
        if t < self.y_count:
            self.y_count -= 1
            return "y"
        idx = int(t) - self.y_count
        A = self.A
        i = A[idx]
        A[idx] = A[-1]
        A.pop()
        self.in_A[i] = False
        self.oracle.delete(i)
        self.widx.set(i, self.fields.lam[i])
        return "x"

    def up_step(self) -> None:
        """Re-add one element by rejection sampling until acceptance."""
        k = len(self.A)
        y_mass = float(self.n - k)
        oracle = self.oracle
        widx = self.widx
        rng = self.rng
        stats = self.stats
        while True:
            stats.proposals += 1
            total = y_mass + widx.total
            u = (1.0 - rng.u()) * total  # in (0, total]
            if u <= y_mass:
                self.y_count += 1
                return
            i = widx.sample(u - y_mass)
            oracle.insert(i)
            if oracle.is_independent():
                self.A.append(i)
                self.in_A[i] = True
                widx.set(i, 0.0)
                return
            oracle.delete(i)
            stats.rejections += 1

    def step(self) -> None:
        self.down_step()
        self.up_step()
        self.stats.steps += 1
        if self._debug:
            assert len(self.A) + self.y_count == self.n
            assert self.oracle.is_independent()

    def run(self) -> list[int]:
        """Execute the configured number of transitions; returns sorted A."""
        for _ in range(self.cfg.steps(self.n)):
            self.step()
        return sorted(self.A)

    def state_mask(self) -> int:
        m = 0
        for i in self.A:
            m |= 1 << i
        return m

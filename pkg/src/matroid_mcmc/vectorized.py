"""Lockstep batch execution of many chains on small ground sets (n <= 16).

Both walks touch only bitmask state, so for small n every query the oracles
answer can be precomputed into dense tables over all 2^n subsets
(independence, rank, per-mask cumulative proposal weights).  A batch of
chains then advances as numpy array operations: one array op per proposal
round instead of one Python call per chain step.  The transition law per
chain is identical to the sequential implementations — the rejection loop
just runs masked over the chains still pending — and is validated against
the exact kernels and the sequential chains by the test suite.

The whole batch consumes a single counter-based stream keyed by cfg.seed, so
batch output is a deterministic function of (spec, fields, cfg, count).
"""
from __future__ import annotations

import numpy as np

from .config import ChainConfig, StepStats
from .errors import SizeLimitError, ValidationError
from .exact import BruteMatroid
from .matroids import Fields, MatroidSpec

VECTORIZED_MAX_N = 16


class SmallTables:
    """Dense per-mask tables for one spec/fields pair."""

    def __init__(self, spec: MatroidSpec, fields: Fields, need: str):
        n = spec.n
        if n > VECTORIZED_MAX_N:
            raise SizeLimitError(
                f"vectorized tables enumerate 2^n masks; n <= {VECTORIZED_MAX_N}")
        if len(fields) != n:
            raise ValidationError("fields length must match ground set size")
        self.n = n
        size = 1 << n
        masks = np.arange(size, dtype=np.int64)
        pc = np.zeros(size, dtype=np.int64)
        for b in range(n):
            pc += (masks >> b) & 1
        self.popcnt = pc

        # select[m, j] = position of the j-th set bit of m (ascending)
        sel = np.zeros((size, n), dtype=np.int64)
        for b in range(n):
            has = ((masks >> b) & 1).astype(bool)
            below = self.popcnt[masks & ((1 << b) - 1)]
            sel[masks[has], below[has]] = b
        self.select = sel

        brute = BruteMatroid(spec)
        lam = np.asarray(fields.lam, dtype=float)
        if need == "polarized":
            self.indep = np.fromiter(
                (brute.is_independent(int(m)) for m in range(size)),
                dtype=bool, count=size)
            # csum[m, i] = sum of λ_j over j <= i with j outside m
            csum = np.zeros((size, n), dtype=float)
            run = np.zeros(size, dtype=float)
            for i in range(n):
                run = run + lam[i] * (((masks >> i) & 1) == 0)
                csum[:, i] = run
            self.csum = csum
            self.x_mass = csum[:, n - 1].copy()
        else:  # random-cluster
            self.rank = np.fromiter(
                (brute.rank(int(m)) for m in range(size)),
                dtype=np.int64, count=size)
            # icsum[m, i] = sum of 1/λ_j over j <= i with j inside m
            icsum = np.zeros((size, n), dtype=float)
            run = np.zeros(size, dtype=float)
            inv = 1.0 / lam
            for i in range(n):
                run = run + inv[i] * (((masks >> i) & 1) == 1)
                icsum[:, i] = run
            self.icsum = icsum
            self.inv_mass = icsum[:, n - 1].copy()


def run_polarized_batch(spec: MatroidSpec, fields: Fields, cfg: ChainConfig,
                        count: int, steps: int | None = None,
                        initial_mask: int = 0):
    """Advance `count` down-up chains in lockstep; returns (masks, stats)."""
    tb = SmallTables(spec, fields, need="polarized")
    n = tb.n
    if steps is None:
        steps = cfg.steps(n)
    gen = np.random.Generator(np.random.Philox(key=cfg.seed & ((1 << 64) - 1)))
    mask = np.full(count, int(initial_mask), dtype=np.int64)
    if not tb.indep[int(initial_mask)]:
        raise ValidationError("initial state must be independent")
    stats = StepStats()
    ones = np.int64(1)

    for _ in range(steps):
        acnt = tb.popcnt[mask]
        y = n - acnt
        t = gen.random(count) * n
        drop_x = t >= y
        if drop_x.any():
            rows = mask[drop_x]
            j = t[drop_x].astype(np.int64) - y[drop_x]
            mask[drop_x] = rows ^ (ones << tb.select[rows, j])
        # rejection-sampled re-add
        pending = np.arange(count, dtype=np.int64)
        while pending.size:
            rows = mask[pending]
            k = tb.popcnt[rows]
            y_mass = (n - k).astype(float)
            total = y_mass + tb.x_mass[rows]
            u = (1.0 - gen.random(pending.size)) * total
            is_y = u <= y_mass
            xs = pending[~is_y]
            stats.proposals += pending.size
            if xs.size:
                rowm = mask[xs]
                v = u[~is_y] - y_mass[~is_y]
                np.minimum(v, tb.x_mass[rowm], out=v)
                pick = (tb.csum[rowm] >= v[:, None]).argmax(axis=1)
                cand = rowm | (ones << pick)
                ok = tb.indep[cand]
                mask[xs[ok]] = cand[ok]
                stats.rejections += int((~ok).sum())
                pending = xs[~ok]
            else:
                pending = xs
        stats.steps += count
    return mask, stats


def run_rc_batch(spec: MatroidSpec, fields: Fields, q: float, cfg: ChainConfig,
                 count: int, steps: int | None = None,
                 initial_mask: int | None = None):
    """Advance `count` up-down random-cluster chains in lockstep."""
    if not 0.0 <= q <= 1.0:
        raise ValidationError(f"q must lie in [0, 1], got {q}")
    tb = SmallTables(spec, fields, need="rc")
    n = tb.n
    if steps is None:
        steps = cfg.steps(n)
    gen = np.random.Generator(np.random.Philox(key=cfg.seed & ((1 << 64) - 1)))
    if initial_mask is None:
        initial_mask = greedy_basis_mask(tb) if q == 0.0 else 0
    mask = np.full(count, int(initial_mask), dtype=np.int64)
    stats = StepStats()
    ones = np.int64(1)
    full = np.int64((1 << n) - 1)

    for _ in range(steps):
        # up: one uniform element of the complement (|A| slots + free elements)
        acnt = tb.popcnt[mask]
        t = gen.random(count) * n
        add_x = t >= acnt
        if add_x.any():
            rows = mask[add_x]
            j = t[add_x].astype(np.int64) - acnt[add_x]
            mask[add_x] = rows | (ones << tb.select[full ^ rows, j])
        # down: weighted removal with rank-drop rejection
        pending = np.arange(count, dtype=np.int64)
        while pending.size:
            rows = mask[pending]
            y_mass = tb.popcnt[rows].astype(float)
            total = y_mass + tb.inv_mass[rows]
            u = (1.0 - gen.random(pending.size)) * total
            is_y = u <= y_mass
            xs = pending[~is_y]
            stats.proposals += pending.size
            if xs.size:
                rowm = mask[xs]
                v = u[~is_y] - y_mass[~is_y]
                np.minimum(v, tb.inv_mass[rowm], out=v)
                pick = (tb.icsum[rowm] >= v[:, None]).argmax(axis=1)
                cand = rowm ^ (ones << pick)
                drops = tb.rank[cand] < tb.rank[rowm]
                coin = gen.random(xs.size)
                ok = ~drops | (coin < q)
                mask[xs[ok]] = cand[ok]
                stats.rejections += int((~ok).sum())
                pending = xs[~ok]
            else:
                pending = xs
        stats.steps += count
    return mask, stats


def greedy_basis_mask(tb: SmallTables) -> int:
    """Maximal-rank subset built by inserting elements in index order."""
    mask = 0
    r = 0
    for i in range(tb.n):
        m2 = mask | (1 << i)
        if tb.rank[m2] > r:
            mask = m2
            r = int(tb.rank[m2])
    return mask

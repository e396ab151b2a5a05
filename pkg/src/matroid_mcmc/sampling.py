"""Batch sampling front end: picks the execution path and merges results.

Small ground sets (n <= 16) run as one vectorized lockstep batch; larger
instances run one sequential chain per sample, chain i keyed seed ^ i, with
an optional worker pool.  Either way the output is ordered by chain index
and is a deterministic function of (inputs, seed).
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

from .config import ChainConfig, StepStats
from .errors import ValidationError
from .matroids import Fields, MatroidSpec
from .polarized import PolarizedChain
from .random_cluster import RandomClusterChain
from .rng import derive_seed
from .vectorized import VECTORIZED_MAX_N, run_polarized_batch, run_rc_batch


def _mask_to_sorted(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _pick_method(method: str, n: int) -> str:
    if method == "auto":
        return "vectorized" if n <= VECTORIZED_MAX_N else "sequential"
    if method not in ("vectorized", "sequential"):
        raise ValidationError(f"method must be auto|vectorized|sequential, got {method!r}")
    return method


def _run_sequential(make_chain, count: int, jobs: int):
    """One fresh chain per sample; results merged in chain-index order."""

    def one(i: int):
        chain = make_chain(i)
        sample = chain.run()
        return sample, chain.stats

    stats = StepStats()
    samples: list[list[int]] = [None] * count  # type: ignore[list-item]
    if jobs <= 1:
        results = map(one, range(count))
    else:
        pool = ThreadPoolExecutor(max_workers=jobs)
        results = pool.map(one, range(count))
    for i, (sample, st) in enumerate(results):
        samples[i] = sample
        stats.merge(st)
    if jobs > 1:
        pool.shutdown()
    return samples, stats


def sample_independent_sets(spec: MatroidSpec, fields: Fields, cfg: ChainConfig,
                            count: int, jobs: int = 1, method: str = "auto",
                            dyncon_backend: str = "auto"):
    """Draw `count` approximate samples from the weighted independent-set law.

    Returns (samples, stats): samples is a list of sorted index lists.
    """
    if count < 1:
        raise ValidationError("count must be >= 1")
    method = _pick_method(method, spec.n)
    if method == "vectorized":
        masks, stats = run_polarized_batch(spec, fields, cfg, count)
        return [_mask_to_sorted(int(m)) for m in masks], stats

    def make_chain(i: int) -> PolarizedChain:
        c = replace(cfg, seed=derive_seed(cfg.seed, i))
        return PolarizedChain(spec, fields, c, dyncon_backend=dyncon_backend)

    return _run_sequential(make_chain, count, jobs)


def sample_random_cluster(spec: MatroidSpec, fields: Fields, q: float,
                          cfg: ChainConfig, count: int, jobs: int = 1,
                          method: str = "auto", dyncon_backend: str = "auto"):
    """Draw `count` approximate samples from the random cluster law."""
    if count < 1:
        raise ValidationError("count must be >= 1")
    method = _pick_method(method, spec.n)
    if method == "vectorized":
        masks, stats = run_rc_batch(spec, fields, q, cfg, count)
        return [_mask_to_sorted(int(m)) for m in masks], stats

    def make_chain(i: int) -> RandomClusterChain:
        c = replace(cfg, seed=derive_seed(cfg.seed, i))
        return RandomClusterChain(spec, fields, q, c, dyncon_backend=dyncon_backend)

    return _run_sequential(make_chain, count, jobs)

"""Connected-spanning-subgraph sampling and all-terminal reliability.

The failed-edge law of a network with independent edge failures is the
weighted independent-set law of the graph's co-graphic matroid with
λ_e = p_e / (1 - p_e): a failure set is feasible iff the surviving edges
still span.  Reliability Z (the probability the network stays connected) is
estimated by deletion/contraction self-reducibility: each level estimates
the failure marginal of one edge from fresh chain samples and multiplies
the corresponding telescoping factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .config import ChainConfig, debug_asserts_enabled
from .errors import SizeLimitError, ValidationError
from .matroids import Fields, MatroidSpec, matroid_from_dict
from .sampling import sample_independent_sets

REL_EXACT_MAX_EDGES = 24
DEFAULT_C0 = 8.0


@dataclass
class NetworkInstance:
    vertices: int
    edges: list[tuple[int, int]]
    p: list[float]

    def __post_init__(self):
        if self.vertices < 1:
            raise ValidationError("graph needs at least one vertex")
        for idx, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.vertices and 0 <= v < self.vertices):
                raise ValidationError(f"edge {idx} endpoint outside [0, {self.vertices})")
        if isinstance(self.p, (int, float)):
            self.p = [float(self.p)] * len(self.edges)
        if len(self.p) != len(self.edges):
            raise ValidationError("need one failure probability per edge")
        for idx, pe in enumerate(self.p):
            if not (0.0 < pe < 1.0):
                raise ValidationError(f"edge {idx}: failure probability must be in (0,1), got {pe}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def is_connected(self, failed_mask: int = 0) -> bool:
        adj = [[] for _ in range(self.vertices)]
        for i, (u, v) in enumerate(self.edges):
            if not (failed_mask >> i & 1) and u != v:
                adj[u].append(v)
                adj[v].append(u)
        seen = [False] * self.vertices
        seen[0] = True
        stack = [0]
        count = 1
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    stack.append(w)
        return count == self.vertices


@dataclass
class ReliabilityEstimate:
    z_hat: float
    rel_err_target: float
    confidence: float
    samples_used: int
    trace: list[dict] = field(default_factory=list)

    def as_json_dict(self) -> dict:
        return {
            "z_hat": self.z_hat,
            "eps": self.rel_err_target,
            "delta": 1.0 - self.confidence,
            "samples_used": self.samples_used,
            "trace": self.trace,
        }


def parse_graph_file(path: str) -> NetworkInstance:
    """Text format: header "n m", then m lines "u v p" (0-based vertices)."""
    with open(path, "r", encoding="utf-8") as f:
        lines = f.read().splitlines()
    if not lines:
        raise ValidationError(f"{path}:1: empty file, expected 'n m' header")
    head = lines[0].split()
    if len(head) != 2:
        raise ValidationError(f"{path}:1: header must be two integers 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise ValidationError(f"{path}:1: header must be two integers 'n m'") from None
    if n < 1 or m < 0:
        raise ValidationError(f"{path}:1: need n >= 1 vertices and m >= 0 edges")
    edges: list[tuple[int, int]] = []
    p: list[float] = []
    for ln in range(1, 1 + m):
        if ln >= len(lines):
            raise ValidationError(f"{path}:{ln + 1}: expected {m} edge lines, file ended early")
        parts = lines[ln].split()
        if len(parts) != 3:
            raise ValidationError(f"{path}:{ln + 1}: edge line must be 'u v p'")
        try:
            u, v = int(parts[0]), int(parts[1])
            pe = float(parts[2])
        except ValueError:
            raise ValidationError(f"{path}:{ln + 1}: edge line must be 'u v p'") from None
        if not (0 <= u < n and 0 <= v < n):
            raise ValidationError(f"{path}:{ln + 1}: vertex ids must lie in [0, {n})")
        if not (0.0 < pe < 1.0) or math.isnan(pe):
            raise ValidationError(f"{path}:{ln + 1}: p must lie strictly in (0, 1)")
        edges.append((u, v))
        p.append(pe)
    for ln in range(1 + m, len(lines)):
        if lines[ln].strip():
            raise ValidationError(f"{path}:{ln + 1}: unexpected content after {m} edge lines")
    return NetworkInstance(n, edges, p)


def failure_fields(inst: NetworkInstance) -> Fields:
    return Fields([pe / (1.0 - pe) for pe in inst.p])


def cographic_spec(inst: NetworkInstance) -> MatroidSpec:
    if not inst.is_connected():
        raise ValidationError("graph must be connected (reliability law undefined otherwise)")
    return matroid_from_dict({"variant": "cographic",
                              "edges": [list(e) for e in inst.edges]})


def rel_sample(inst: NetworkInstance, eps: float, seed: int,
               method: str = "auto") -> list[int]:
    """One approximate sample of the failed-edge set (TV <= eps from exact)."""
    spec = cographic_spec(inst)
    cfg = ChainConfig(epsilon=eps, seed=seed)
    samples, _ = sample_independent_sets(spec, failure_fields(inst), cfg, 1,
                                         method=method)
    out = samples[0]
    if debug_asserts_enabled():
        mask = 0
        for i in out:
            mask |= 1 << i
        assert inst.is_connected(mask), "sampled failure set disconnects the graph"
    return out


def rel_connected_subgraph(inst: NetworkInstance, eps: float, seed: int,
                           method: str = "auto") -> list[int]:
    """One approximate connected spanning subgraph (surviving edge indices)."""
    failed = set(rel_sample(inst, eps, seed, method=method))
    return [i for i in range(inst.m) if i not in failed]


def rel_exact(inst: NetworkInstance) -> float:
    """Exact reliability by enumerating all 2^m failure sets."""
    if inst.m > REL_EXACT_MAX_EDGES:
        raise SizeLimitError(f"exact reliability enumerates 2^m subsets; m <= {REL_EXACT_MAX_EDGES}")
    if not inst.is_connected():
        return 0.0
    z = 0.0
    for mask in range(1 << inst.m):
        wt = 1.0
        for i, pe in enumerate(inst.p):
            wt *= pe if mask >> i & 1 else (1.0 - pe)
        if inst.is_connected(mask):
            z += wt
    return z


def rel_estimate(inst: NetworkInstance, eps: float, delta: float, seed: int,
                 c0: float = DEFAULT_C0, method: str = "auto",
                 jobs: int = 1) -> ReliabilityEstimate:
    """Estimate reliability within relative error eps at confidence 1 - delta.

    Processes edges in input order.  Each level estimates the failure
    marginal q of the next edge from N fresh chain samples and applies the
    matching identity: failure-likely edges (q >= 1/2) are deleted with
    factor p/q (a bridge never reaches this branch: its failure marginal is
    exactly 0), others are contracted with factor (1-p)/(1-q).  Contractions
    keep parallel edges; self-loops carry factor 1 and are dropped.
    """
    if not (0.0 < eps < 1.0):
        raise ValidationError(f"eps must lie in (0,1), got {eps}")
    if not (0.0 < delta < 1.0):
        raise ValidationError(f"delta must lie in (0,1), got {delta}")
    if not inst.is_connected():
        raise ValidationError("graph must be connected")
    m0 = inst.m
    if m0 == 0:
        return ReliabilityEstimate(1.0, eps, 1.0 - delta, 0, [])
    n_samples = math.ceil(c0 * m0 * math.log(2 * m0 / delta) / (eps * eps))
    sampler_eps = eps / (8.0 * m0)

    # current graph: union-find over original vertices + remaining edge list
    parent = list(range(inst.vertices))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    remaining = [(i, u, v, inst.p[i]) for i, (u, v) in enumerate(inst.edges)]
    z = 1.0
    trace: list[dict] = []
    used = 0
    level = 0
    while remaining:
        orig, u, v, pe = remaining[0]
        ru, rv = find(u), find(v)
        if ru == rv:
            # contracted into a self-loop: its failure never matters
            trace.append({"edge": orig, "branch": "loop", "marginal": None})
            remaining.pop(0)
            continue
        # relabel the current graph densely and sample its failure law
        roots = sorted({find(x) for x in range(inst.vertices)})
        label = {r: i for i, r in enumerate(roots)}
        lvl_edges = []
        lvl_p = []
        for _, eu, ev, ep in remaining:
            lvl_edges.append((label[find(eu)], label[find(ev)]))
            lvl_p.append(ep)
        lvl_inst = NetworkInstance(len(roots), lvl_edges, lvl_p)
        lvl_cfg = ChainConfig(epsilon=sampler_eps,
                              seed=(seed + (level + 1) * 0x9E3779B97F4A7C15) & ((1 << 64) - 1))
        samples, _ = sample_independent_sets(
            cographic_spec(lvl_inst), failure_fields(lvl_inst), lvl_cfg,
            n_samples, method=method, jobs=jobs)
        used += n_samples
        # the edge under study sits at position 0 of the level's edge list
        q_hat = sum(1 for s in samples if s and s[0] == 0) / n_samples
        if q_hat >= 0.5:
            z *= pe / q_hat
            trace.append({"edge": orig, "branch": "delete", "marginal": q_hat})
        else:
            z *= (1.0 - pe) / (1.0 - q_hat)
            trace.append({"edge": orig, "branch": "contract", "marginal": q_hat})
            parent[find(u)] = find(v)
        remaining.pop(0)
        level += 1
    return ReliabilityEstimate(min(z, 1.0), eps, 1.0 - delta, used, trace)

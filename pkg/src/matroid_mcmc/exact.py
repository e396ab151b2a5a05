"""Brute-force ground truth: exhaustive distributions, exact transition
kernels, and TV distance.

Everything here recomputes from scratch (fresh union-find / BFS / GF(2)
elimination per query) so it shares no code with the incremental oracles it
is used to validate.  All functions enforce desk-scale size guards.
"""
from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from .errors import SizeLimitError, UnsupportedOperationError
from .matroids import Fields, MatroidSpec

MU_MAX_N = 20
PI_MAX_N = 10
RC_MAX_N = 20
KERNEL_MAX_STATES = 4000


class ExactDistribution:
    """Support (list of bitmasks) with parallel probability vector."""

    __slots__ = ("support", "prob")

    def __init__(self, support, prob):
        self.support = list(support)
        p = np.asarray(prob, dtype=float)
        self.prob = p / p.sum()

    def as_dict(self) -> dict[int, float]:
        return {s: float(p) for s, p in zip(self.support, self.prob)}

    def prob_of(self, mask: int) -> float:
        try:
            return float(self.prob[self.support.index(mask)])
        except ValueError:
            return 0.0


class BruteMatroid:
    """Mask-level is_independent / rank for a spec, recomputed per call."""

    def __init__(self, spec: MatroidSpec):
        self.spec = spec
        self.n = spec.n
        self._family = frozenset(spec.independent_sets) if spec.variant == "explicit" else None

    def is_independent(self, mask: int) -> bool:
        s = self.spec
        if s.variant == "explicit":
            return mask in self._family
        if s.variant == "uniform":
            return _popcount(mask) <= s.k
        if s.variant == "partition":
            for b, cap in zip(s.blocks, s.caps):
                if sum(1 for i in b if mask >> i & 1) > cap:
                    return False
            return True
        if s.variant == "graphic":
            return self._graphic_forest(mask)
        if s.variant == "cographic":
            return self._complement_connected(mask)
        return self._gf2_rank(mask) == _popcount(mask)

    def rank(self, mask: int) -> int:
        s = self.spec
        if s.variant == "explicit":
            fam = s.independent_sets
            return max((_popcount(f) for f in fam if f & ~mask == 0), default=0)
        if s.variant == "uniform":
            return min(_popcount(mask), s.k)
        if s.variant == "partition":
            return sum(min(sum(1 for i in b if mask >> i & 1), cap)
                       for b, cap in zip(s.blocks, s.caps))
        if s.variant == "graphic":
            return s.vertices - self._components(mask)
        if s.variant == "binary-linear":
            return self._gf2_rank(mask)
        raise UnsupportedOperationError("no brute rank for cographic specs")

    # -- per-variant helpers -------------------------------------------------

    def _components(self, mask: int) -> int:
        s = self.spec
        parent = list(range(s.vertices))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        comp = s.vertices
        for i, (u, v) in enumerate(s.edges):
            if mask >> i & 1 and u != v:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
                    comp -= 1
        return comp

    def _graphic_forest(self, mask: int) -> bool:
        s = self.spec
        for i, (u, v) in enumerate(s.edges):
            if mask >> i & 1 and u == v:
                return False
        return s.vertices - self._components(mask) == _popcount(mask)

    def _complement_connected(self, mask: int) -> bool:
        s = self.spec
        adj = [[] for _ in range(s.vertices)]
        for i, (u, v) in enumerate(s.edges):
            if not (mask >> i & 1) and u != v:
                adj[u].append(v)
                adj[v].append(u)
        seen = [False] * s.vertices
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
        return count == s.vertices

    def _gf2_rank(self, mask: int) -> int:
        basis: list[int] = []
        for i in range(self.n):
            if mask >> i & 1:
                c = self.spec.matrix[i]
                for b in basis:
                    if (c ^ b) < c:
                        c ^= b
                if c:
                    basis.append(c)
                    basis.sort(reverse=True)
        return len(basis)


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _lam_prod(fields: Fields, mask: int) -> float:
    p = 1.0
    i = 0
    m = mask
    while m:
        if m & 1:
            p *= fields.lam[i]
        m >>= 1
        i += 1
    return p


def independent_masks(spec: MatroidSpec) -> list[int]:
    """All independent sets, found by growing from the empty set."""
    brute = BruteMatroid(spec)
    n = spec.n
    out = [0]
    stack = [(0, -1)]
    while stack:
        mask, last = stack.pop()
        for i in range(last + 1, n):
            m2 = mask | (1 << i)
            if brute.is_independent(m2):
                out.append(m2)
                stack.append((m2, i))
    return sorted(out)


def exact_mu(spec: MatroidSpec, fields: Fields) -> ExactDistribution:
    """The weighted independent-set distribution: P(A) ∝ Π_{i∈A} λ_i."""
    if spec.n > MU_MAX_N:
        raise SizeLimitError(f"exact_mu enumerates independent sets; n <= {MU_MAX_N}")
    masks = independent_masks(spec)
    return ExactDistribution(masks, [_lam_prod(fields, m) for m in masks])


def exact_pi(spec: MatroidSpec, fields: Fields) -> ExactDistribution:
    """The lifted distribution over (A, B): A independent, B a labeled subset
    of the n auxiliary slots with |A| + |B| = n; weight λ^A / C(n, |A|).

    Atoms are encoded as amask | (bmask << n).
    """
    if spec.n > PI_MAX_N:
        raise SizeLimitError(f"exact_pi enumerates labeled pairs; n <= {PI_MAX_N}")
    n = spec.n
    support = []
    weights = []
    for amask in independent_masks(spec):
        a = _popcount(amask)
        w = _lam_prod(fields, amask) / math.comb(n, a)
        for bset in combinations(range(n), n - a):
            bmask = 0
            for j in bset:
                bmask |= 1 << j
            support.append(amask | (bmask << n))
            weights.append(w)
    return ExactDistribution(support, weights)


def pi_x_marginal(spec: MatroidSpec, fields: Fields) -> ExactDistribution:
    """Marginal of exact_pi on the A component (for the identity vs exact_mu)."""
    dist = exact_pi(spec, fields)
    n = spec.n
    acc: dict[int, float] = {}
    xmask = (1 << n) - 1
    for atom, p in zip(dist.support, dist.prob):
        a = atom & xmask
        acc[a] = acc.get(a, 0.0) + float(p)
    items = sorted(acc.items())
    return ExactDistribution([m for m, _ in items], [p for _, p in items])


def exact_rc(spec: MatroidSpec, fields: Fields, q: float) -> ExactDistribution:
    """Random cluster law over all subsets: P(S) ∝ q^{-rk(S)} Π λ_i, q ∈ [0,1];
    q = 0 keeps exactly the maximum-rank subsets, weighted by Π λ_i."""
    if spec.n > RC_MAX_N:
        raise SizeLimitError(f"exact_rc enumerates all subsets; n <= {RC_MAX_N}")
    if not 0.0 <= q <= 1.0:
        raise UnsupportedOperationError(f"exact_rc needs q in [0,1], got {q}")
    brute = BruteMatroid(spec)
    n = spec.n
    ranks = [brute.rank(m) for m in range(1 << n)]
    rmax = max(ranks)
    support = []
    weights = []
    for m in range(1 << n):
        if q == 0.0:
            if ranks[m] != rmax:
                continue
            w = _lam_prod(fields, m)
        else:
            # shift by rmax so the weights stay bounded: q^{-rk} ∝ (1/q)^{rk-rmax}
            w = _lam_prod(fields, m) * (1.0 / q) ** (ranks[m] - rmax)
        support.append(m)
        weights.append(w)
    return ExactDistribution(support, weights)


def tv_distance(a, b) -> float:
    """Total variation distance ½ Σ |a - b| between distributions given as
    ExactDistribution or {mask: prob} dicts (e.g. empirical histograms)."""
    da = a.as_dict() if isinstance(a, ExactDistribution) else dict(a)
    db = b.as_dict() if isinstance(b, ExactDistribution) else dict(b)
    keys = set(da) | set(db)
    return 0.5 * sum(abs(da.get(k, 0.0) - db.get(k, 0.0)) for k in keys)


def empirical_distribution(samples) -> dict[int, float]:
    """Histogram of bitmask samples as a {mask: frequency} dict."""
    counts: dict[int, int] = {}
    total = 0
    for m in samples:
        m = int(m)
        counts[m] = counts.get(m, 0) + 1
        total += 1
    return {m: c / total for m, c in counts.items()}


# ---------------------------------------------------------------------------
# Exact one-step transition kernels (collapsed states: independent mask A)
# ---------------------------------------------------------------------------

def exact_kernel(kind: str, spec: MatroidSpec, fields: Fields, q: float | None = None):
    """One-step transition matrix of the chosen walk over collapsed states.

    Returns (states, P): states is a list of A-bitmasks, P[i, j] the
    probability of moving from states[i] to states[j] in one full transition
    (down+up for "polarized", up+down for "random-cluster").
    """
    if kind == "polarized":
        return _polarized_kernel(spec, fields)
    if kind == "random-cluster":
        if q is None:
            raise UnsupportedOperationError("random-cluster kernel needs q")
        return _rc_kernel(spec, fields, q)
    raise UnsupportedOperationError(f"unknown kernel kind {kind!r}")


def _polarized_kernel(spec: MatroidSpec, fields: Fields):
    n = spec.n
    states = independent_masks(spec)
    if len(states) > KERNEL_MAX_STATES:
        raise SizeLimitError(f"kernel state space {len(states)} exceeds {KERNEL_MAX_STATES}")
    index = {m: i for i, m in enumerate(states)}
    lam = fields.lam
    P = np.zeros((len(states), len(states)))

    def up_law(bmask: int):
        """Target re-add law from mid-state (B, y) with |B| + y = n - 1."""
        k = _popcount(bmask)
        wy = (k + 1) / math.comb(n, k)  # aggregate over the k+1 free slots
        cands = [(bmask, wy)]
        for i in range(n):
            if not bmask >> i & 1:
                m2 = bmask | (1 << i)
                if m2 in index:
                    cands.append((m2, lam[i] / math.comb(n, k + 1)))
        z = sum(w for _, w in cands)
        return [(m, w / z) for m, w in cands]

    for amask in states:
        row = index[amask]
        a = _popcount(amask)
        y = n - a
        if y:
            # drop one of the y auxiliary slots
            for m2, pu in up_law(amask):
                P[row, index[m2]] += (y / n) * pu
        for i in range(n):
            if amask >> i & 1:
                for m2, pu in up_law(amask ^ (1 << i)):
                    P[row, index[m2]] += (1 / n) * pu
    return states, P


def _rc_kernel(spec: MatroidSpec, fields: Fields, q: float):
    n = spec.n
    states = list(range(1 << n))
    if len(states) > KERNEL_MAX_STATES:
        raise SizeLimitError(f"kernel state space {len(states)} exceeds {KERNEL_MAX_STATES}")
    brute = BruteMatroid(spec)
    ranks = [brute.rank(m) for m in states]
    lam = fields.lam
    P = np.zeros((len(states), len(states)))

    def down_law(bmask: int):
        """Realized removal law from mid-state (B, y) with |B| + y = n + 1."""
        k = _popcount(bmask)
        cands = [(bmask, float(k))]  # remove a slot: aggregate mass |B|
        for j in range(n):
            if bmask >> j & 1:
                m2 = bmask ^ (1 << j)
                w = 1.0 / lam[j]
                if ranks[m2] < ranks[bmask]:
                    w *= q  # rank-critical removal accepted with probability q
                if w:
                    cands.append((m2, w))
        z = sum(w for _, w in cands)
        return [(m, w / z) for m, w in cands]

    for bmask in states:
        row = bmask
        a = _popcount(bmask)
        # up: add one uniform element of the complement (a slots, n - a elements)
        if a:
            for m2, pd in down_law(bmask):
                P[row, m2] += (a / n) * pd
        for i in range(n):
            if not bmask >> i & 1:
                for m2, pd in down_law(bmask | (1 << i)):
                    P[row, m2] += (1 / n) * pd
    return states, P


def labeled_polarized_kernel(spec: MatroidSpec, fields: Fields):
    """Transition kernel over labeled states (A, B) — validates the collapse.

    States encoded amask | (bmask << n), matching exact_pi.
    """
    n = spec.n
    dist = exact_pi(spec, fields)  # enforces the size guard
    states = list(dist.support)
    index = {s: i for i, s in enumerate(states)}
    ind = set(independent_masks(spec))
    lam = fields.lam
    xmask = (1 << n) - 1
    P = np.zeros((len(states), len(states)))

    def up_law(am: int, bm: int):
        k = _popcount(am)
        cands = []
        for j in range(n):
            if not bm >> j & 1:
                cands.append((am, bm | (1 << j), 1.0 / math.comb(n, k)))
        for i in range(n):
            if not am >> i & 1:
                a2 = am | (1 << i)
                if a2 in ind:
                    cands.append((a2, bm, lam[i] / math.comb(n, k + 1)))
        z = sum(w for _, _, w in cands)
        return [(a2, b2, w / z) for a2, b2, w in cands]

    for s in states:
        am, bm = s & xmask, s >> n
        row = index[s]
        for i in range(n):
            if am >> i & 1:
                for a2, b2, pu in up_law(am ^ (1 << i), bm):
                    P[row, index[a2 | (b2 << n)]] += (1 / n) * pu
            if bm >> i & 1:
                for a2, b2, pu in up_law(am, bm ^ (1 << i)):
                    P[row, index[a2 | (b2 << n)]] += (1 / n) * pu
    return states, P


def stationary_residual(P: np.ndarray, probs) -> float:
    """max |sᵀP - sᵀ| for a candidate stationary vector s."""
    s = np.asarray(probs, dtype=float)
    return float(np.max(np.abs(s @ P - s)))


def is_matroid_family(n: int, masks) -> bool:
    """Check the matroid axioms exhaustively (∅, downward closure, exchange)."""
    fam = set(masks)
    if 0 not in fam:
        return False
    for m in fam:
        mm = m
        while mm:
            bit = mm & -mm
            if (m ^ bit) not in fam:
                return False
            mm ^= bit
    for s in fam:
        for t in fam:
            if _popcount(s) < _popcount(t):
                extra = t & ~s
                ok = False
                while extra:
                    bit = extra & -extra
                    if (s | bit) in fam:
                        ok = True
                        break
                    extra ^= bit
                if not ok:
                    return False
    return True

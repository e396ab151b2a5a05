"""Matroid specifications, external fields, and incremental oracles.

A MatroidSpec names one of six concrete matroid variants; build_oracle turns
it into a stateful oracle maintaining a mutable set S with insert / delete /
is_independent, plus rank queries on rank-capable variants.  Graphic and
cographic backends are backed by the dynamic-connectivity module; the others
use counters, table lookup, or GF(2) elimination at desk scale.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .dyncon import dyn_graph
from .errors import ContractError, UnsupportedOperationError, ValidationError

EXPLICIT_MAX_N = 24

RANK_CAPABLE_VARIANTS = ("explicit", "uniform", "partition", "graphic", "binary-linear")
ALL_VARIANTS = RANK_CAPABLE_VARIANTS + ("cographic",)


class Fields:
    """External fields: one positive weight per ground-set element."""

    __slots__ = ("lam", "lambda_max", "lambda_min")

    def __init__(self, lam):
        lam = [float(x) for x in lam]
        if not lam:
            raise ValidationError("fields vector must be nonempty")
        for i, x in enumerate(lam):
            if not (x > 0 and math.isfinite(x)):
                raise ValidationError(f"lambda[{i}] must be finite and > 0, got {x}")
        self.lam = lam
        self.lambda_max = max(lam)
        self.lambda_min = min(lam)

    def __len__(self):
        return len(self.lam)

    @classmethod
    def constant(cls, n: int, value: float = 1.0) -> "Fields":
        return cls([value] * n)


@dataclass
class MatroidSpec:
    variant: str
    # variant-specific payload (unused fields stay None)
    n_elements: int = 0
    independent_sets: list[int] | None = None   # explicit: list of bitmasks
    k: int | None = None                        # uniform
    blocks: list[list[int]] | None = None       # partition
    caps: list[int] | None = None               # partition
    edges: list[tuple[int, int]] | None = None  # graphic / cographic
    vertices: int = 0                           # graphic / cographic (inferred)
    matrix: list[int] | None = None             # binary-linear: column bitmasks
    rows: int = 0

    @property
    def n(self) -> int:
        return self.n_elements

    @property
    def rank_capable(self) -> bool:
        return self.variant != "cographic"


def _as_edge_list(raw, what: str):
    if not isinstance(raw, list) or not raw:
        raise ValidationError(f"{what}: 'edges' must be a nonempty list of [u, v] pairs")
    edges = []
    for idx, e in enumerate(raw):
        if (not isinstance(e, list) or len(e) != 2
                or not all(isinstance(x, int) and x >= 0 for x in e)):
            raise ValidationError(f"{what}: edge {idx} must be a pair of vertex ids >= 0")
        edges.append((e[0], e[1]))
    return edges


def matroid_from_dict(d: dict) -> MatroidSpec:
    """Validate a MatroidSpec JSON object and build the spec."""
    if not isinstance(d, dict):
        raise ValidationError("matroid spec must be a JSON object")
    variant = d.get("variant")
    if variant not in ALL_VARIANTS:
        raise ValidationError(
            f"unknown matroid variant {variant!r}; expected one of {', '.join(ALL_VARIANTS)}")

    if variant == "explicit":
        n = d.get("n")
        if not isinstance(n, int) or not 1 <= n <= EXPLICIT_MAX_N:
            raise ValidationError(f"explicit spec needs integer 'n' in [1, {EXPLICIT_MAX_N}]")
        raw = d.get("independent_sets")
        if not isinstance(raw, list):
            raise ValidationError("explicit spec needs 'independent_sets': a list of index lists")
        masks = set()
        for idx, s in enumerate(raw):
            if not isinstance(s, list) or not all(isinstance(i, int) and 0 <= i < n for i in s):
                raise ValidationError(
                    f"independent_sets[{idx}] must list element indices in [0, {n})")
            if len(set(s)) != len(s):
                raise ValidationError(f"independent_sets[{idx}] has repeated elements")
            m = 0
            for i in s:
                m |= 1 << i
            masks.add(m)
        if 0 not in masks:
            raise ValidationError("explicit family must contain the empty set")
        for m in masks:
            mm = m
            while mm:
                bit = mm & -mm
                if (m ^ bit) not in masks:
                    raise ValidationError(
                        "explicit family is not downward closed "
                        f"(set {sorted(_bits(m))} present, without element {bit.bit_length() - 1} absent)")
                mm ^= bit
        return MatroidSpec("explicit", n_elements=n, independent_sets=sorted(masks))

    if variant == "uniform":
        n, k = d.get("n"), d.get("k")
        if not isinstance(n, int) or n < 1:
            raise ValidationError("uniform spec needs integer 'n' >= 1")
        if not isinstance(k, int) or not 0 <= k <= n:
            raise ValidationError("uniform spec needs integer 'k' with 0 <= k <= n")
        return MatroidSpec("uniform", n_elements=n, k=k)

    if variant == "partition":
        blocks, caps = d.get("blocks"), d.get("caps")
        if not isinstance(blocks, list) or not blocks or not isinstance(caps, list):
            raise ValidationError("partition spec needs 'blocks' (list of index lists) and 'caps'")
        if len(caps) != len(blocks):
            raise ValidationError("partition spec: 'caps' must match 'blocks' in length")
        seen: set[int] = set()
        total = 0
        for bi, b in enumerate(blocks):
            if not isinstance(b, list) or not b or not all(isinstance(i, int) and i >= 0 for i in b):
                raise ValidationError(f"blocks[{bi}] must be a nonempty list of element indices")
            for i in b:
                if i in seen:
                    raise ValidationError(f"element {i} appears in more than one block")
                seen.add(i)
            total += len(b)
            cap = caps[bi]
            if not isinstance(cap, int) or not 0 <= cap <= len(b):
                raise ValidationError(
                    f"caps[{bi}] must be an integer in [0, {len(b)}] (block size)")
        if seen != set(range(total)):
            raise ValidationError("blocks must partition the dense index range 0..n-1")
        return MatroidSpec("partition", n_elements=total,
                           blocks=[list(b) for b in blocks], caps=list(caps))

    if variant in ("graphic", "cographic"):
        edges = _as_edge_list(d.get("edges"), variant)
        vertices = max(max(e) for e in edges) + 1
        if variant == "cographic" and not _edges_connected(vertices, edges):
            raise ValidationError(
                "cographic spec requires a connected ambient graph "
                "(connected-spanning-subgraph law is undefined otherwise)")
        return MatroidSpec(variant, n_elements=len(edges), edges=edges, vertices=vertices)

    # binary-linear
    raw = d.get("matrix")
    if not isinstance(raw, list) or not raw:
        raise ValidationError("binary-linear spec needs a nonempty 'matrix' of 0/1 rows")
    width = None
    for ri, row in enumerate(raw):
        if not isinstance(row, list) or not all(x in (0, 1) for x in row):
            raise ValidationError(f"matrix row {ri} must be a list of 0/1 entries")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ValidationError(f"matrix row {ri} has length {len(row)}, expected {width}")
    if not width:
        raise ValidationError("binary-linear matrix must have at least one column")
    cols = []
    for j in range(width):
        c = 0
        for ri, row in enumerate(raw):
            if row[j]:
                c |= 1 << ri
        cols.append(c)
    return MatroidSpec("binary-linear", n_elements=width, matrix=cols, rows=len(raw))


def load_matroid(path: str) -> MatroidSpec:
    with open(path, "r", encoding="utf-8") as f:
        try:
            d = json.load(f)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    return matroid_from_dict(d)


def _bits(mask: int):
    while mask:
        bit = mask & -mask
        yield bit.bit_length() - 1
        mask ^= bit


def _edges_connected(vertices: int, edges) -> bool:
    adj = [[] for _ in range(vertices)]
    for u, v in edges:
        if u != v:
            adj[u].append(v)
            adj[v].append(u)
    seen = [False] * vertices
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                count += 1
                stack.append(w)
    return count == vertices


# ---------------------------------------------------------------------------
# Incremental oracles
# ---------------------------------------------------------------------------

class _BaseOracle:
    kind = "rank-capable"

    def __init__(self, n: int):
        self.n = n
        self.current: set[int] = set()

    def _check_absent(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise ContractError(f"element {i} outside ground set [0, {self.n})")
        if i in self.current:
            raise ContractError(f"element {i} is already in the oracle's set")

    def _check_present(self, i: int) -> None:
        if i not in self.current:
            raise ContractError(f"element {i} is not in the oracle's set")

    # rank-capable default: derive the drop test from two rank calls
    def rank_drops_on_delete(self, i: int) -> bool:
        self._check_present(i)
        before = self.rank()
        self.delete(i)
        after = self.rank()
        self.insert(i)
        return after == before - 1

    def rank(self) -> int:  # pragma: no cover - overridden
        raise UnsupportedOperationError("rank not implemented")


class ExplicitOracle(_BaseOracle):
    def __init__(self, spec: MatroidSpec):
        super().__init__(spec.n)
        self._family = set(spec.independent_sets)
        self._mask = 0

    def insert(self, i: int) -> None:
        self._check_absent(i)
        self.current.add(i)
        self._mask |= 1 << i

    def delete(self, i: int) -> None:
        self._check_present(i)
        self.current.remove(i)
        self._mask ^= 1 << i

    def is_independent(self) -> bool:
        return self._mask in self._family

    def rank(self) -> int:
        mask = self._mask
        best = 0
        for f in self._family:
            if f & ~mask == 0:
                c = bin(f).count("1")
                if c > best:
                    best = c
        return best


class UniformOracle(_BaseOracle):
    def __init__(self, spec: MatroidSpec):
        super().__init__(spec.n)
        self.k = spec.k

    def insert(self, i: int) -> None:
        self._check_absent(i)
        self.current.add(i)

    def delete(self, i: int) -> None:
        self._check_present(i)
        self.current.remove(i)

    def is_independent(self) -> bool:
        return len(self.current) <= self.k

    def rank(self) -> int:
        return min(len(self.current), self.k)

    def rank_drops_on_delete(self, i: int) -> bool:
        self._check_present(i)
        return len(self.current) <= self.k


class PartitionOracle(_BaseOracle):
    def __init__(self, spec: MatroidSpec):
        super().__init__(spec.n)
        self._block_of = [0] * spec.n
        for bi, b in enumerate(spec.blocks):
            for i in b:
                self._block_of[i] = bi
        self._caps = list(spec.caps)
        self._counts = [0] * len(spec.blocks)

    def insert(self, i: int) -> None:
        self._check_absent(i)
        self.current.add(i)
        self._counts[self._block_of[i]] += 1

    def delete(self, i: int) -> None:
        self._check_present(i)
        self.current.remove(i)
        self._counts[self._block_of[i]] -= 1

    def is_independent(self) -> bool:
        return all(c <= cap for c, cap in zip(self._counts, self._caps))

    def rank(self) -> int:
        return sum(min(c, cap) for c, cap in zip(self._counts, self._caps))

    def rank_drops_on_delete(self, i: int) -> bool:
        self._check_present(i)
        b = self._block_of[i]
        return self._counts[b] <= self._caps[b]


class GraphicOracle(_BaseOracle):
    """Forest/rank oracle over the spec's edge list; rk(S) = |V| - kappa(S)."""

    def __init__(self, spec: MatroidSpec, dyncon_backend: str = "auto"):
        super().__init__(spec.n)
        self._edges = spec.edges
        self._g = dyn_graph(spec.vertices, backend=dyncon_backend)
        self._handles: dict[int, int] = {}
        self._loops = 0
        self._size = 0

    def insert(self, i: int) -> None:
        self._check_absent(i)
        u, v = self._edges[i]
        self.current.add(i)
        self._size += 1
        if u == v:
            self._loops += 1
        else:
            self._handles[i] = self._g.insert_edge(u, v)

    def delete(self, i: int) -> None:
        self._check_present(i)
        u, v = self._edges[i]
        self.current.remove(i)
        self._size -= 1
        if u == v:
            self._loops -= 1
        else:
            self._g.delete_edge(self._handles.pop(i))

    def is_independent(self) -> bool:
        if self._loops:
            return False
        return self._size == self._g.vertex_count - self._g.component_count()

    def rank(self) -> int:
        return self._g.vertex_count - self._g.component_count()

    def rank_drops_on_delete(self, i: int) -> bool:
        self._check_present(i)
        u, v = self._edges[i]
        if u == v:
            return False
        self._g.delete_edge(self._handles[i])
        drops = not self._g.connected(u, v)
        self._handles[i] = self._g.insert_edge(u, v)
        return drops


class CographicOracle(_BaseOracle):
    """Independence-only oracle: S independent iff G[E \\ S] stays connected.

    The dynamic graph holds the complement E \\ S, so oracle insert = edge
    deletion and oracle delete = edge re-insertion.
    """

    kind = "independence-only"

    def __init__(self, spec: MatroidSpec, dyncon_backend: str = "auto"):
        super().__init__(spec.n)
        self._edges = spec.edges
        self._g = dyn_graph(spec.vertices, backend=dyncon_backend)
        self._handles = [self._g.insert_edge(u, v) for u, v in spec.edges]

    def insert(self, i: int) -> None:
        self._check_absent(i)
        self.current.add(i)
        self._g.delete_edge(self._handles[i])

    def delete(self, i: int) -> None:
        self._check_present(i)
        self.current.remove(i)
        u, v = self._edges[i]
        self._handles[i] = self._g.insert_edge(u, v)

    def is_independent(self) -> bool:
        return self._g.component_count() == 1

    def rank(self) -> int:
        raise UnsupportedOperationError("cographic oracle answers independence only")

    def rank_drops_on_delete(self, i: int) -> bool:
        raise UnsupportedOperationError("cographic oracle answers independence only")


class BinaryLinearOracle(_BaseOracle):
    """Columns over GF(2); rank recomputed by bitmask elimination per query."""

    def __init__(self, spec: MatroidSpec):
        super().__init__(spec.n)
        self._cols = spec.matrix

    def insert(self, i: int) -> None:
        self._check_absent(i)
        self.current.add(i)

    def delete(self, i: int) -> None:
        self._check_present(i)
        self.current.remove(i)

    def _rank_of(self, elements) -> int:
        # xor basis with distinct leading bits, kept in descending order so a
        # single pass fully reduces each new column
        basis: list[int] = []
        for i in elements:
            c = self._cols[i]
            for b in basis:
                if (c ^ b) < c:
                    c ^= b
            if c:
                basis.append(c)
                basis.sort(reverse=True)
        return len(basis)

    def is_independent(self) -> bool:
        return self.rank() == len(self.current)

    def rank(self) -> int:
        return self._rank_of(self.current)

    def rank_drops_on_delete(self, i: int) -> bool:
        self._check_present(i)
        before = self.rank()
        after = self._rank_of([j for j in self.current if j != i])
        return after == before - 1


def build_oracle(spec: MatroidSpec, kind: str = "independence",
                 dyncon_backend: str = "auto"):
    """Oracle with current = empty set; kind is "independence" or "rank"."""
    if kind not in ("independence", "rank"):
        raise ValidationError(f"oracle kind must be 'independence' or 'rank', got {kind!r}")
    if kind == "rank" and not spec.rank_capable:
        raise UnsupportedOperationError(
            f"variant {spec.variant!r} supports independence queries only")
    if spec.variant == "explicit":
        return ExplicitOracle(spec)
    if spec.variant == "uniform":
        return UniformOracle(spec)
    if spec.variant == "partition":
        return PartitionOracle(spec)
    if spec.variant == "graphic":
        return GraphicOracle(spec, dyncon_backend)
    if spec.variant == "cographic":
        return CographicOracle(spec, dyncon_backend)
    return BinaryLinearOracle(spec)

"""Fully dynamic graph connectivity.

Two interchangeable backends behind `dyn_graph`:

* ``hdt`` — the Holm–de Lichtenberg–Thorup level scheme: every edge carries a
  level, F_i is a spanning forest of the edges with level >= i (F_0 is the
  forest answering queries), and each forest is stored as Euler tours in
  splay trees with parent pointers.  Deleting a tree edge searches the
  smaller half for a replacement, promoting inspected edges one level up so
  each edge is inspected O(log n) times; insert/delete/query are O(log^2 n)
  amortized.
* ``naive`` — stores the edge multiset and recomputes components by
  union-find whenever a query follows a mutation.  O(m) per recompute; used
  as the differential-testing oracle and the scaling baseline.

Both accept multigraphs; self-loops are stored but never affect connectivity.
"""
from __future__ import annotations

from .errors import ContractError, ValidationError


# ---------------------------------------------------------------------------
# Splay-tree Euler tour machinery (hdt backend internals)
# ---------------------------------------------------------------------------

class _Node:
    """One Euler-tour position: a vertex occurrence or a tree-edge arc.

    cnt_v counts vertex nodes in the subtree; agg_nt / agg_tree OR together
    the per-node flags (vertex has level non-tree edges / arc belongs to a
    tree edge whose level equals this forest's level).
    """

    __slots__ = ("parent", "left", "right", "vertex", "edge",
                 "cnt_v", "flag_nt", "agg_nt", "flag_tree", "agg_tree")

    def __init__(self, vertex: int = -1, edge: int = -1, flag_tree: bool = False):
        self.parent = None
        self.left = None
        self.right = None
        self.vertex = vertex
        self.edge = edge
        self.cnt_v = 1 if vertex >= 0 else 0
        self.flag_nt = False
        self.agg_nt = False
        self.flag_tree = flag_tree
        self.agg_tree = flag_tree


def _update(x: _Node) -> None:
    c = 1 if x.vertex >= 0 else 0
    nt = x.flag_nt
    tr = x.flag_tree
    l = x.left
    if l is not None:
        c += l.cnt_v
        nt = nt or l.agg_nt
        tr = tr or l.agg_tree
    r = x.right
    if r is not None:
        c += r.cnt_v
        nt = nt or r.agg_nt
        tr = tr or r.agg_tree
    x.cnt_v = c
    x.agg_nt = nt
    x.agg_tree = tr


def _rotate(x: _Node) -> None:
    p = x.parent
    g = p.parent
    if p.left is x:
        p.left = x.right
        if x.right is not None:
            x.right.parent = p
        x.right = p
    else:
        p.right = x.left
        if x.left is not None:
            x.left.parent = p
        x.left = p
    p.parent = x
    x.parent = g
    if g is not None:
        if g.left is p:
            g.left = x
        else:
            g.right = x
    _update(p)
    _update(x)


def _splay(x: _Node) -> _Node:
    while x.parent is not None:
        p = x.parent
        g = p.parent
        if g is not None:
            if (g.left is p) == (p.left is x):
                _rotate(p)  # zig-zig
            else:
                _rotate(x)  # zig-zag
        _rotate(x)
    return x


def _join(a: _Node | None, b: _Node | None) -> _Node | None:
    """Concatenate two tours (every position of a before b)."""
    if a is None:
        return b
    if b is None:
        return a
    r = a
    while r.right is not None:
        r = r.right
    _splay(r)
    r.right = b
    b.parent = r
    _update(r)
    return r


def _split_before(x: _Node):
    """Split x's tour into (positions before x, positions from x on)."""
    _splay(x)
    l = x.left
    if l is not None:
        l.parent = None
        x.left = None
        _update(x)
    return l, x


def _split_after(x: _Node):
    """Split x's tour into (positions up to and including x, the rest)."""
    _splay(x)
    r = x.right
    if r is not None:
        r.parent = None
        x.right = None
        _update(x)
    return x, r


def _same_tree(a: _Node, b: _Node) -> bool:
    if a is b:
        return True
    _splay(a)
    _splay(b)
    # after splaying b, a can only have a parent if both live in one tree
    return a.parent is not None


def _reroot(x: _Node) -> _Node:
    """Rotate the circular tour so it starts at x; returns the tree root."""
    l, r = _split_before(x)
    if l is None:
        return r
    return _join(r, l)


def _ett_link(nu: _Node, nv: _Node, arc_a: _Node, arc_b: _Node) -> None:
    """Join the tours of nu and nv as  tour(u) + a + tour(v) + b."""
    tu = _reroot(nu)
    tv = _reroot(nv)
    _join(_join(_join(tu, arc_a), tv), arc_b)


def _ett_cut(arc_a: _Node, arc_b: _Node) -> None:
    """Remove both arcs of a tree edge, splitting the tour in two.

    The segment strictly between the two arcs (in circular order) is one
    resulting tree; the rest is the other.  Neither side is ever empty: each
    contains at least one endpoint's vertex node.
    """
    left, _ = _split_before(arc_a)
    if left is None or not _same_tree(arc_b, left):
        # order: [left] a [mid] b [tail]
        _, rest = _split_after(arc_a)
        mid, _ = _split_before(arc_b)
        _, tail = _split_after(arc_b)
        _join(left, tail)
    else:
        # order: [l1] b [l2] a [tail] — the circular middle is l2
        lb, _l2 = _split_after(arc_b)
        l1, _ = _split_before(arc_b)
        _, tail = _split_after(arc_a)
        _join(l1, tail)


def _find_flagged(x: _Node, want_tree: bool) -> _Node:
    """Descend from root x to some node carrying the requested flag."""
    while True:
        if (x.flag_tree if want_tree else x.flag_nt):
            return x
        l = x.left
        if l is not None and (l.agg_tree if want_tree else l.agg_nt):
            x = l
            continue
        x = x.right


class _Edge:
    __slots__ = ("u", "v", "level", "tree", "arcs")

    def __init__(self, u: int, v: int):
        self.u = u
        self.v = v
        self.level = 0
        self.tree = False
        self.arcs: dict[int, tuple[_Node, _Node]] = {}


class _HdtBackend:
    name = "hdt"

    def __init__(self, vertex_count: int):
        self.vertex_count = vertex_count
        self._components = vertex_count
        self._edges: dict[int, _Edge | None] = {}  # None marks a self-loop
        self._next = 0
        self._vnodes: list[dict[int, _Node]] = [{}]
        self._adj: list[dict[int, set[int]]] = [{}]

    # -- plumbing ----------------------------------------------------------

    def _ensure_level(self, i: int) -> None:
        while len(self._vnodes) <= i:
            self._vnodes.append({})
            self._adj.append({})

    def _vnode(self, v: int, i: int) -> _Node:
        d = self._vnodes[i]
        nd = d.get(v)
        if nd is None:
            nd = _Node(vertex=v)
            d[v] = nd
        return nd

    def _set_nt_flag(self, v: int, i: int, present: bool) -> None:
        nd = self._vnode(v, i)
        _splay(nd)
        nd.flag_nt = present
        _update(nd)

    def _adj_add(self, h: int, e: _Edge, i: int) -> None:
        for v in (e.u, e.v):
            s = self._adj[i].setdefault(v, set())
            if not s:
                self._set_nt_flag(v, i, True)
            s.add(h)

    def _adj_remove(self, h: int, e: _Edge, i: int) -> None:
        for v in (e.u, e.v):
            s = self._adj[i][v]
            s.remove(h)
            if not s:
                del self._adj[i][v]
                self._set_nt_flag(v, i, False)

    def _link_tree_edge(self, h: int, e: _Edge, levels: int) -> None:
        """Create arcs for e in forests 0..levels and link its endpoints."""
        for j in range(levels + 1):
            self._ensure_level(j)
            a = _Node(edge=h, flag_tree=(j == e.level))
            b = _Node(edge=h)
            e.arcs[j] = (a, b)
            _ett_link(self._vnode(e.u, j), self._vnode(e.v, j), a, b)

    # -- public ops ---------------------------------------------------------

    def insert_edge(self, u: int, v: int) -> int:
        _check_vertex(u, self.vertex_count)
        _check_vertex(v, self.vertex_count)
        h = self._next
        self._next += 1
        if u == v:
            self._edges[h] = None
            return h
        e = _Edge(u, v)
        self._edges[h] = e
        if _same_tree(self._vnode(u, 0), self._vnode(v, 0)):
            self._adj_add(h, e, 0)
        else:
            e.tree = True
            self._link_tree_edge(h, e, 0)
            self._components -= 1
        return h

    def delete_edge(self, h: int) -> None:
        try:
            e = self._edges.pop(h)
        except KeyError:
            raise ContractError(f"edge handle {h} is not live") from None
        if e is None:  # self-loop
            return
        if not e.tree:
            self._adj_remove(h, e, e.level)
            return
        for i in range(e.level, -1, -1):
            a, b = e.arcs[i]
            _ett_cut(a, b)
        e.arcs.clear()
        for i in range(e.level, -1, -1):
            if self._replace(e.u, e.v, i):
                return
        self._components += 1

    def connected(self, u: int, v: int) -> bool:
        _check_vertex(u, self.vertex_count)
        _check_vertex(v, self.vertex_count)
        if u == v:
            return True
        return _same_tree(self._vnode(u, 0), self._vnode(v, 0))

    def component_count(self) -> int:
        return self._components

    # -- replacement search --------------------------------------------------

    def _replace(self, u0: int, v0: int, i: int) -> bool:
        """Look for a level-i replacement after cutting a tree edge (u0,v0).

        Scans the smaller of the two halves; level-i tree edges inside it are
        promoted to level i+1 first, then level-i non-tree edges are examined:
        an edge leaving the half reconnects (done), an edge inside is
        promoted.  Promotions preserve the size invariant because the smaller
        half has at most half the vertices of the level-i tree that was split.
        """
        nu = self._vnode(u0, i)
        nv = self._vnode(v0, i)
        _splay(nu)
        su = nu.cnt_v
        _splay(nv)
        sv = nv.cnt_v
        anchor = nu if su <= sv else nv
        adj_i = self._adj[i]

        while True:
            _splay(anchor)
            if not anchor.agg_tree:
                break
            nd = _find_flagged(anchor, want_tree=True)
            h2 = nd.edge
            e2 = self._edges[h2]
            _splay(nd)
            nd.flag_tree = False
            _update(nd)
            e2.level = i + 1
            self._ensure_level(i + 1)
            a2 = _Node(edge=h2, flag_tree=True)
            b2 = _Node(edge=h2)
            e2.arcs[i + 1] = (a2, b2)
            _ett_link(self._vnode(e2.u, i + 1), self._vnode(e2.v, i + 1), a2, b2)

        while True:
            _splay(anchor)
            if not anchor.agg_nt:
                return False
            nd = _find_flagged(anchor, want_tree=False)
            x = nd.vertex
            while True:
                s = adj_i.get(x)
                if not s:
                    break
                h2 = next(iter(s))
                e2 = self._edges[h2]
                y = e2.v if e2.u == x else e2.u
                if _same_tree(self._vnode(y, i), anchor):
                    # both endpoints inside the half: promote one level up
                    self._adj_remove(h2, e2, i)
                    e2.level = i + 1
                    self._ensure_level(i + 1)
                    self._adj_add(h2, e2, i + 1)
                else:
                    # leaves the half: this edge reconnects the two sides
                    self._adj_remove(h2, e2, i)
                    e2.tree = True
                    self._link_tree_edge(h2, e2, i)
                    return True


class _NaiveBackend:
    """Recompute-by-traversal twin of the hdt backend (same interface)."""

    name = "naive"

    def __init__(self, vertex_count: int):
        self.vertex_count = vertex_count
        self._edges: dict[int, tuple[int, int]] = {}
        self._next = 0
        self._dirty = True
        self._labels: list[int] = []
        self._ncomp = vertex_count

    def insert_edge(self, u: int, v: int) -> int:
        _check_vertex(u, self.vertex_count)
        _check_vertex(v, self.vertex_count)
        h = self._next
        self._next += 1
        self._edges[h] = (u, v)
        self._dirty = True
        return h

    def delete_edge(self, h: int) -> None:
        try:
            del self._edges[h]
        except KeyError:
            raise ContractError(f"edge handle {h} is not live") from None
        self._dirty = True

    def _recompute(self) -> None:
        parent = list(range(self.vertex_count))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for u, v in self._edges.values():
            if u != v:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
        self._labels = [find(a) for a in range(self.vertex_count)]
        self._ncomp = len(set(self._labels))
        self._dirty = False

    def connected(self, u: int, v: int) -> bool:
        _check_vertex(u, self.vertex_count)
        _check_vertex(v, self.vertex_count)
        if u == v:
            return True
        if self._dirty:
            self._recompute()
        return self._labels[u] == self._labels[v]

    def component_count(self) -> int:
        if self._dirty:
            self._recompute()
        return self._ncomp


_AUTO_NAIVE_MAX_VERTICES = 32


def dyn_graph(vertex_count: int, backend: str = "auto"):
    """Build a dynamic-connectivity structure over `vertex_count` vertices.

    backend: "hdt", "naive", or "auto" (naive for tiny graphs, hdt beyond).
    """
    if vertex_count < 1:
        raise ValidationError("vertex_count must be >= 1")
    if backend == "auto":
        backend = "naive" if vertex_count <= _AUTO_NAIVE_MAX_VERTICES else "hdt"
    if backend == "hdt":
        return _HdtBackend(vertex_count)
    if backend == "naive":
        return _NaiveBackend(vertex_count)
    raise ValidationError(f"unknown dyncon backend {backend!r}")


def _check_vertex(v: int, n: int) -> None:
    if not 0 <= v < n:
        raise ContractError(f"vertex {v} outside range [0, {n})")

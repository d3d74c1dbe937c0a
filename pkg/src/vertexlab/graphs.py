"""Multigraphs with free loops, k-fragments, permutations, and the gluing
algebra: G.H, the fragment product GH, tensor powers, permutation fragments
and pinned edges.

Graphs are read as topological 1-complexes: every edge owns two half-edges,
a loop contributes 2 to its vertex degree, and a closed edge without any
vertex (the free loop) is a first-class citizen counted by ``free_loops``.
All values are immutable; all operations are pure.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence

from vertexlab.errors import GuardExceeded


class MultiGraph:
    """Finite undirected multigraph with loops, parallel edges and free loops.

    Vertices are the indices 0..vertex_count-1.  Edges are stored as a
    sorted tuple of normalized pairs (u, v) with u <= v; parallel edges are
    repeated entries.
    """

    __slots__ = ("vertex_count", "edges", "free_loops", "_hash")

    def __init__(self, vertex_count: int, edges: Iterable = (), free_loops: int = 0):
        norm = []
        for e in edges:
            u, v = e
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge {e!r} out of range for {vertex_count} vertices")
            norm.append((u, v) if u <= v else (v, u))
        norm.sort()
        if vertex_count < 0 or free_loops < 0:
            raise ValueError("negative vertex or free-loop count")
        object.__setattr__(self, "vertex_count", vertex_count)
        object.__setattr__(self, "edges", tuple(norm))
        object.__setattr__(self, "free_loops", free_loops)
        object.__setattr__(
            self, "_hash", hash((vertex_count, self.edges, free_loops))
        )

    def __setattr__(self, name, value):
        raise AttributeError("MultiGraph is immutable")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> list:
        """Per-vertex degree; a loop counts twice."""
        d = [0] * self.vertex_count
        for u, v in self.edges:
            d[u] += 1
            d[v] += 1
        return d

    def degree(self, v: int) -> int:
        return self.degrees()[v]

    def __eq__(self, other):
        if not isinstance(other, MultiGraph):
            return NotImplemented
        return (
            self.vertex_count == other.vertex_count
            and self.edges == other.edges
            and self.free_loops == other.free_loops
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"MultiGraph({self.vertex_count}, {list(self.edges)}, free_loops={self.free_loops})"


EMPTY_GRAPH = MultiGraph(0)
FREE_LOOP = MultiGraph(0, (), 1)  # the vertexless loop


class Fragment:
    """A multigraph with k labeled degree-1 boundary vertices (stubs).

    On construction the vertices are renumbered so that the vertex labeled
    i+1 is index i; canonical operations never permute labeled vertices.
    Labeled vertices are bare half-edge ends: they carry no loops and no
    weight in any evaluation.
    """

    __slots__ = ("graph", "arity")

    def __init__(self, graph: MultiGraph, labels: Sequence[int]):
        labels = tuple(labels)
        k = len(labels)
        if len(set(labels)) != k:
            raise ValueError("label map must be injective")
        for v in labels:
            if not (0 <= v < graph.vertex_count):
                raise ValueError(f"label target {v} out of range")
        deg = graph.degrees()
        for v in labels:
            if deg[v] != 1:
                raise ValueError(f"labeled vertex {v} has degree {deg[v]}, want 1")
        if tuple(labels) != tuple(range(k)):
            remap = {v: i for i, v in enumerate(labels)}
            nxt = k
            for v in range(graph.vertex_count):
                if v not in remap:
                    remap[v] = nxt
                    nxt += 1
            graph = MultiGraph(
                graph.vertex_count,
                [(remap[u], remap[v]) for u, v in graph.edges],
                graph.free_loops,
            )
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "arity", k)

    def __setattr__(self, name, value):
        raise AttributeError("Fragment is immutable")

    @property
    def labels(self):
        return tuple(range(self.arity))

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    @property
    def unlabeled_count(self) -> int:
        return self.graph.vertex_count - self.arity

    @property
    def edges(self):
        return self.graph.edges

    @property
    def free_loops(self) -> int:
        return self.graph.free_loops

    def stub_edges(self) -> tuple:
        """Edge index of the unique edge at each labeled vertex."""
        out = [-1] * self.arity
        for idx, (u, v) in enumerate(self.graph.edges):
            if u < self.arity:
                out[u] = idx
            if v < self.arity:
                out[v] = idx
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, Fragment):
            return NotImplemented
        return self.arity == other.arity and self.graph == other.graph

    def __hash__(self):
        return hash((self.arity, self.graph))

    def __repr__(self):
        return f"Fragment({self.graph!r}, arity={self.arity})"


class Permutation:
    """A bijection of [m] = {1..m}, stored by its image sequence."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        m = len(images)
        if sorted(images) != list(range(1, m + 1)):
            raise ValueError(f"not a permutation of 1..{m}: {images!r}")
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(range(1, m + 1))

    @classmethod
    def all_of_degree(cls, m: int):
        """All of S_m, lexicographic by image sequence."""
        return [cls(p) for p in itertools.permutations(range(1, m + 1))]

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def then(self, other: "Permutation") -> "Permutation":
        """Composite sending i to other(self(i)): self acts first.

        This is the order in which strands traverse a left-to-right product
        of permutation fragments, so r_rho r_sigma = r_(rho.then(sigma)).
        """
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return Permutation(other.images[x - 1] for x in self.images)

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, x in enumerate(self.images, start=1):
            inv[x - 1] = i
        return Permutation(inv)

    def orbits(self) -> list:
        """Orbits (cycles, fixed points included), each as a tuple."""
        seen = [False] * self.degree
        out = []
        for i in range(1, self.degree + 1):
            if seen[i - 1]:
                continue
            cyc = []
            j = i
            while not seen[j - 1]:
                seen[j - 1] = True
                cyc.append(j)
                j = self.images[j - 1]
            out.append(tuple(cyc))
        return out

    def orbit_count(self) -> int:
        return len(self.orbits())

    def sign(self) -> int:
        """+1 or -1, by inversion-count parity."""
        inv = 0
        im = self.images
        for i in range(len(im)):
            for j in range(i + 1, len(im)):
                if im[i] > im[j]:
                    inv += 1
        return -1 if inv & 1 else 1

    def cycle_type(self) -> tuple:
        return tuple(sorted((len(c) for c in self.orbits()), reverse=True))

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({list(self.images)})"


# ---------------------------------------------------------------------------
# half-edge suppression
# ---------------------------------------------------------------------------

def _resolve(num_points: int, edges: list, num_survivors: int):
    """Suppress the degree-2 points with ids >= num_survivors.

    Each suppressed point joins its two incident half-edges into one edge;
    chains that close up without touching a survivor become free loops.
    Returns (edges between survivors, number of new free loops).
    """
    at = [[] for _ in range(num_points)]
    for idx, (p, q) in enumerate(edges):
        at[p].append(2 * idx)
        at[q].append(2 * idx + 1)
    partner = {}
    for p in range(num_survivors, num_points):
        hs = at[p]
        if len(hs) != 2:
            raise ValueError(f"suppressed point {p} has degree {len(hs)}, want 2")
        partner[hs[0]] = hs[1]
        partner[hs[1]] = hs[0]

    visited = [False] * len(edges)
    new_edges = []
    closed = 0

    for idx, (p, q) in enumerate(edges):
        if visited[idx]:
            continue
        if p < num_survivors:
            half = 2 * idx
            start = p
        elif q < num_survivors:
            half = 2 * idx + 1
            start = q
        else:
            continue  # fully interior, handled in the cycle sweep
        visited[idx] = True
        cur = half ^ 1  # cross the starting edge
        while True:
            e, side = cur >> 1, cur & 1
            pt = edges[e][side]
            if pt < num_survivors:
                new_edges.append((start, pt))
                break
            nxt = partner[cur]
            visited[nxt >> 1] = True
            cur = nxt ^ 1

    for idx in range(len(edges)):
        if visited[idx]:
            continue
        closed += 1
        visited[idx] = True
        starth = 2 * idx
        cur = starth
        while True:
            nxt = partner[cur ^ 1]  # jump through the far endpoint's joint
            visited[nxt >> 1] = True
            cur = nxt
            if cur == starth:
                break

    return new_edges, closed


# ---------------------------------------------------------------------------
# gluing and products
# ---------------------------------------------------------------------------

def glue(g: Fragment, h: Fragment) -> MultiGraph:
    """G.H: identify equally labeled stubs and suppress the joined points.

    The result is a plain graph; suppressed chains closing into a cycle
    with no surviving vertex each add one free loop.
    """
    if g.arity != h.arity:
        raise ValueError(f"arity mismatch: {g.arity} vs {h.arity}")
    k = g.arity
    ug = g.unlabeled_count
    uh = h.unlabeled_count
    ns = ug + uh
    ge = g.graph.edges
    he = h.graph.edges
    # survivors 0..ns-1 (g then h unlabeled); joints ns..ns+k-1
    edges = []
    for u, v in ge:
        edges.append(
            (u - k if u >= k else ns + u, v - k if v >= k else ns + v)
        )
    for u, v in he:
        edges.append(
            (ug + u - k if u >= k else ns + u, ug + v - k if v >= k else ns + v)
        )
    new_edges, closed = _resolve(ns + k, edges, ns)
    return MultiGraph(ns, new_edges, g.free_loops + h.free_loops + closed)


def fragment_product(g: Fragment, h: Fragment) -> Fragment:
    """GH on 2k-fragments: wire right labels of g to left labels of h.

    Vertex labeled k+i in g is identified with vertex labeled i in h and
    suppressed; labels 1..k of the result come from g, k+1..2k from h.
    """
    if g.arity != h.arity:
        raise ValueError(f"arity mismatch: {g.arity} vs {h.arity}")
    if g.arity % 2:
        raise ValueError(f"fragment product needs even arity, got {g.arity}")
    k = g.arity // 2
    ug = g.unlabeled_count
    uh = h.unlabeled_count
    ns = 2 * k + ug + uh
    # survivors: g's 0..k-1 keep ids, h's k..2k-1 keep ids,
    # then g's unlabeled at 2k.., h's unlabeled after; joints at ns..
    edges = []
    for u, v in g.graph.edges:
        a = ns + (u - k) if k <= u < 2 * k else u
        b = ns + (v - k) if k <= v < 2 * k else v
        edges.append((a, b))
    for u, v in h.graph.edges:
        a = ns + u if u < k else (u if u < 2 * k else u + ug)
        b = ns + v if v < k else (v if v < 2 * k else v + ug)
        edges.append((a, b))
    new_edges, closed = _resolve(ns + k, edges, ns)
    graph = MultiGraph(ns, new_edges, g.free_loops + h.free_loops + closed)
    return Fragment(graph, range(2 * k))


def unit_fragment(k: int) -> Fragment:
    """The product unit: k parallel strands with ends labeled i and k+i."""
    graph = MultiGraph(2 * k, [(i, k + i) for i in range(k)])
    return Fragment(graph, range(2 * k))


def perm_fragment(k: int, pi: Permutation) -> Fragment:
    """The copy-permuting wiring on m stacked k-strand bundles.

    Boundary positions are grouped in copy blocks of size k, matching the
    tensor-power layout: position j+(i-1)k is strand j of copy i.  The km
    edges route strand j of copy i on the left to strand j of copy pi(i)
    on the right, so gluing against tensor powers permutes whole copies.
    """
    m = pi.degree
    km = k * m
    edges = []
    for i in range(1, m + 1):
        off = (i - 1) * k
        target_off = (pi(i) - 1) * k
        for j in range(1, k + 1):
            edges.append((j + off - 1, km + j + target_off - 1))
    graph = MultiGraph(2 * km, edges)
    return Fragment(graph, range(2 * km))


def r_fragment(pi: Permutation) -> Fragment:
    """r_pi: k disjoint edges with ends labeled i and k+pi(i)."""
    k = pi.degree
    graph = MultiGraph(2 * k, [(i - 1, k + pi(i) - 1) for i in range(1, k + 1)])
    return Fragment(graph, range(2 * k))


def tensor_power(x: Fragment, m: int) -> Fragment:
    """m disjoint copies of a 2k-fragment, boundary relabeled in order.

    In copy j, label i becomes i+(j-1)k and label k+i becomes km+i+(j-1)k.
    """
    if x.arity % 2:
        raise ValueError(f"tensor power needs even arity, got {x.arity}")
    if m < 0:
        raise ValueError("negative tensor power")
    k = x.arity // 2
    u = x.unlabeled_count
    km = k * m
    edges = []
    for j in range(1, m + 1):
        def remap(v, j=j):
            if v < k:
                return v + (j - 1) * k
            if v < 2 * k:
                return km + (v - k) + (j - 1) * k
            return 2 * km + (j - 1) * u + (v - 2 * k)
        for a, b in x.graph.edges:
            edges.append((remap(a), remap(b)))
    graph = MultiGraph(2 * km + m * u, edges, m * x.free_loops)
    return Fragment(graph, range(2 * km))


def disjoint_union(g: MultiGraph, h: MultiGraph) -> MultiGraph:
    n = g.vertex_count
    edges = list(g.edges) + [(u + n, v + n) for u, v in h.edges]
    return MultiGraph(n + h.vertex_count, edges, g.free_loops + h.free_loops)


def pin_edges(g: MultiGraph, u_set: Sequence[int], s: Mapping[int, int]) -> MultiGraph:
    """G_s: append the edge u s(u) for each u in u_set (multi-edges allowed)."""
    u_set = list(u_set)
    if len(set(u_set)) != len(u_set):
        raise ValueError("pinned vertices must be distinct")
    extra = []
    for u in u_set:
        if not (0 <= u < g.vertex_count):
            raise ValueError(f"pinned vertex {u} out of range")
        try:
            t = s[u]
        except KeyError:
            raise ValueError(f"pin map not defined on vertex {u}") from None
        if not (0 <= t < g.vertex_count):
            raise ValueError(f"pin target {t} out of range")
        extra.append((u, t))
    return MultiGraph(g.vertex_count, list(g.edges) + extra, g.free_loops)


# ---------------------------------------------------------------------------
# canonical forms
# ---------------------------------------------------------------------------

def canonical_form(obj, max_permute: int = 10) -> bytes:
    """Canonical byte string: equal iff isomorphic (label-respecting).

    Brute force over permutations of the unlabeled vertices, so only
    intended for small graphs; raises GuardExceeded beyond ``max_permute``
    permutable vertices.
    """
    if isinstance(obj, Fragment):
        k = obj.arity
        graph = obj.graph
        tag = "F"
    elif isinstance(obj, MultiGraph):
        k = 0
        graph = obj
        tag = "G"
    else:
        raise TypeError(f"cannot canonicalize {type(obj).__name__}")
    n = graph.vertex_count
    movable = n - k
    if movable > max_permute:
        raise GuardExceeded(
            f"canonical_form guard: {movable} permutable vertices > {max_permute}"
        )
    best = _min_edge_form(n, k, graph.edges)
    return repr((tag, n, k, graph.free_loops, best)).encode("ascii")


def _min_edge_form(n: int, k: int, edges) -> tuple:
    if n == k or not edges:
        return tuple(edges)
    best = None
    ids = list(range(k))
    for perm in itertools.permutations(range(k, n)):
        m = ids + list(perm)
        # m maps old -> new only for indices >= k; labeled ids fixed
        relab = []
        for u, v in edges:
            a = m[u]
            b = m[v]
            relab.append((a, b) if a <= b else (b, a))
        relab.sort()
        t = tuple(relab)
        if best is None or t < best:
            best = t
    return best


def isomorphic(a, b) -> bool:
    return canonical_form(a) == canonical_form(b)


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def graph_to_json(obj) -> dict:
    """{"vertices": n, "edges": [[u,v],...], "free_loops": f, "labels": [...]}"""
    if isinstance(obj, Fragment):
        return {
            "vertices": obj.vertex_count,
            "edges": [[u, v] for u, v in obj.edges],
            "free_loops": obj.free_loops,
            "labels": list(obj.labels),
        }
    if isinstance(obj, MultiGraph):
        return {
            "vertices": obj.vertex_count,
            "edges": [[u, v] for u, v in obj.edges],
            "free_loops": obj.free_loops,
        }
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def graph_from_json(data: dict):
    """Inverse of graph_to_json; a "labels" key makes it a Fragment."""
    if not isinstance(data, dict):
        raise ValueError("graph JSON must be an object")
    try:
        n = data["vertices"]
        raw_edges = data.get("edges", [])
        fl = data.get("free_loops", 0)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad graph JSON: {exc}") from exc
    if not isinstance(n, int) or not isinstance(fl, int):
        raise ValueError("vertices and free_loops must be integers")
    edges = []
    for e in raw_edges:
        if not (isinstance(e, (list, tuple)) and len(e) == 2):
            raise ValueError(f"bad edge entry {e!r}")
        u, v = e
        if not (isinstance(u, int) and isinstance(v, int)):
            raise ValueError(f"bad edge entry {e!r}")
        edges.append((u, v))
    graph = MultiGraph(n, edges, fl)
    if "labels" in data:
        labels = data["labels"]
        if not (isinstance(labels, list) and all(isinstance(v, int) for v in labels)):
            raise ValueError("labels must be a list of vertex indices")
        return Fragment(graph, labels)
    return graph

"""Vertex models y and partition-function evaluation.

Two exact evaluators are provided: a brute-force sum over all edge colorings
and a frontier-tensor contraction that eliminates vertices one at a time.
They must agree on everything; the contraction is just faster.

Weights live in Q(i).  Internally the evaluators downshift to plain int or
Fraction arithmetic when a model's weight table allows it; this is a speed
hack only, every intermediate stays exact.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from vertexlab.errors import DegreeOverflow, GuardExceeded
from vertexlab.exactalg import GaussianRational, I, ONE, ZERO
from vertexlab.graphs import Fragment, MultiGraph


def _as_gauss(x) -> GaussianRational:
    return x if isinstance(x, GaussianRational) else GaussianRational(x)


def _multisets(colors: int, max_size: int):
    """All incidence vectors in N^colors with coordinate sum <= max_size."""
    def rec(prefix, remaining, slots):
        if slots == 0:
            yield tuple(prefix)
            return
        for c in range(remaining + 1):
            yield from rec(prefix + [c], remaining - c, slots - 1)
    yield from rec([], max_size, colors)


class VertexModel:
    """Weight table on color multisets of size <= max_degree, values in Q(i).

    The table is total: omitted multisets are filled with exact zero at
    construction.  Looking up a multiset beyond max_degree is an error,
    never a silent zero.
    """

    __slots__ = ("colors", "max_degree", "weights", "_fast")

    def __init__(self, colors: int, max_degree: int, weights: Mapping):
        if colors < 1:
            raise ValueError("need at least one color")
        if max_degree < 0:
            raise ValueError("negative max_degree")
        table = {vec: ZERO for vec in _multisets(colors, max_degree)}
        for vec, w in weights.items():
            vec = tuple(vec)
            if len(vec) != colors or any(c < 0 or not isinstance(c, int) for c in vec):
                raise ValueError(f"bad multiset vector {vec!r}")
            if sum(vec) > max_degree:
                raise ValueError(
                    f"multiset {vec!r} exceeds max_degree {max_degree}"
                )
            table[vec] = _as_gauss(w)
        object.__setattr__(self, "colors", colors)
        object.__setattr__(self, "max_degree", max_degree)
        object.__setattr__(self, "weights", table)
        object.__setattr__(self, "_fast", None)

    def __setattr__(self, name, value):
        raise AttributeError("VertexModel is immutable")

    def weight(self, vec: Sequence[int]) -> GaussianRational:
        vec = tuple(vec)
        try:
            return self.weights[vec]
        except KeyError:
            raise DegreeOverflow(
                f"multiset {vec!r} outside table (max_degree {self.max_degree})"
            ) from None

    def _runtime_table(self):
        """(table, kind): weights over the cheapest exact scalar type.

        kind "int" and "fraction" tables hold plain numbers, "gaussint"
        holds (re, im) integer pairs, "gauss" holds GaussianRational.
        """
        if self._fast is None:
            vals = list(self.weights.values())
            all_real = all(w.imag == 0 for w in vals)
            all_int = all(
                w.real.denominator == 1 and w.imag.denominator == 1 for w in vals
            )
            if all_real and all_int:
                fast = {k: int(w.real) for k, w in self.weights.items()}
                kind = "int"
            elif all_int:
                fast = {
                    k: (int(w.real), int(w.imag)) for k, w in self.weights.items()
                }
                kind = "gaussint"
            elif all_real:
                fast = {k: w.real for k, w in self.weights.items()}
                kind = "fraction"
            else:
                fast = dict(self.weights)
                kind = "gauss"
            object.__setattr__(self, "_fast", (fast, kind))
        return self._fast

    def __repr__(self):
        nonzero = sum(1 for w in self.weights.values() if w)
        return (
            f"VertexModel(colors={self.colors}, max_degree={self.max_degree}, "
            f"nonzero={nonzero})"
        )


def ones_model(colors: int, max_degree: int) -> VertexModel:
    """Every multiset weighs 1."""
    return VertexModel(
        colors, max_degree, {vec: ONE for vec in _multisets(colors, max_degree)}
    )


def matchings_model(max_degree: int) -> VertexModel:
    """2-color model counting matchings: weight 1 iff at most one copy of
    color 2 appears in the multiset."""
    return VertexModel(
        2,
        max_degree,
        {vec: ONE for vec in _multisets(2, max_degree) if vec[1] <= 1},
    )


def parity_model(max_degree: int) -> VertexModel:
    """1-color model with weight i^d on the degree-d multiset; its partition
    function is (-1)^{edge count}."""
    return VertexModel(1, max_degree, {(d,): I ** d for d in range(max_degree + 1)})


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _plain_graph(g) -> MultiGraph:
    if isinstance(g, Fragment):
        if g.arity != 0:
            raise ValueError("partition function needs a plain graph (arity 0)")
        return g.graph
    if isinstance(g, MultiGraph):
        return g
    raise TypeError(f"cannot evaluate {type(g).__name__}")


def _polymorphic_table(y: VertexModel):
    """A weight table whose values support +, * and truth-testing directly
    (the gaussint pair encoding does not)."""
    table, kind = y._runtime_table()
    return y.weights if kind == "gaussint" else table


def _check_degrees(y: VertexModel, g: MultiGraph, skip_below: int = 0):
    degs = g.degrees()
    for v in range(skip_below, g.vertex_count):
        if degs[v] > y.max_degree:
            raise DegreeOverflow(
                f"vertex {v} has degree {degs[v]} > max_degree {y.max_degree}"
            )


def _incidence(g: MultiGraph):
    """Per vertex: list of (edge index, multiplicity); loops count twice."""
    incid = [[] for _ in range(g.vertex_count)]
    for idx, (u, v) in enumerate(g.edges):
        if u == v:
            incid[u].append((idx, 2))
        else:
            incid[u].append((idx, 1))
            incid[v].append((idx, 1))
    return incid


def partition_function(y: VertexModel, g) -> GaussianRational:
    """p_y(G): sum over all edge colorings of the product of vertex weights.

    Straight enumeration; the reference evaluator everything else is checked
    against.  Each free loop contributes a factor of the color count.
    """
    g = _plain_graph(g)
    _check_degrees(y, g)
    table, kind = y._runtime_table()
    n = y.colors
    incid = _incidence(g)
    nv = g.vertex_count
    if kind == "gaussint":
        # weights are Gaussian integers: accumulate (re, im) integer pairs
        tre = tim = 0
        for kappa in itertools.product(range(n), repeat=len(g.edges)):
            pre, pim = 1, 0
            for v in range(nv):
                vec = [0] * n
                for idx, mult in incid[v]:
                    vec[kappa[idx]] += mult
                wre, wim = table[tuple(vec)]
                if wre == 0 and wim == 0:
                    pre = pim = 0
                    break
                pre, pim = pre * wre - pim * wim, pre * wim + pim * wre
            tre += pre
            tim += pim
        scale = n ** g.free_loops
        return GaussianRational(tre * scale, tim * scale)
    total = 0
    for kappa in itertools.product(range(n), repeat=len(g.edges)):
        prod = 1
        for v in range(nv):
            vec = [0] * n
            for idx, mult in incid[v]:
                vec[kappa[idx]] += mult
            w = table[tuple(vec)]
            if not w:
                prod = 0
                break
            prod = prod * w
        total = total + prod
    return _as_gauss(total) * n ** g.free_loops


class FragmentTensor:
    """Boundary tensor of a fragment: one exact entry per boundary coloring
    phi in [colors]^arity, ordered lexicographically (colors are 0-based)."""

    __slots__ = ("colors", "arity", "entries")

    def __init__(self, colors: int, arity: int, entries: Sequence):
        entries = tuple(_as_gauss(e) for e in entries)
        if len(entries) != colors ** arity:
            raise ValueError(
                f"need {colors ** arity} entries, got {len(entries)}"
            )
        object.__setattr__(self, "colors", colors)
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("FragmentTensor is immutable")

    def entry(self, phi: Sequence[int]) -> GaussianRational:
        phi = tuple(phi)
        if len(phi) != self.arity or any(not 0 <= c < self.colors for c in phi):
            raise ValueError(f"bad boundary coloring {phi!r}")
        idx = 0
        for c in phi:
            idx = idx * self.colors + c
        return self.entries[idx]

    def __eq__(self, other):
        if not isinstance(other, FragmentTensor):
            return NotImplemented
        return (
            self.colors == other.colors
            and self.arity == other.arity
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.colors, self.arity, self.entries))

    def __repr__(self):
        return f"FragmentTensor(colors={self.colors}, arity={self.arity})"


def fragment_tensor(y: VertexModel, frag: Fragment) -> FragmentTensor:
    """Entry at phi: sum over edge colorings pinning stub edge i to phi(i),
    of the weight product over unlabeled vertices only."""
    if not isinstance(frag, Fragment):
        raise TypeError("fragment_tensor needs a Fragment")
    _check_degrees(y, frag.graph, skip_below=frag.arity)
    table = _polymorphic_table(y)
    n = y.colors
    k = frag.arity
    g = frag.graph
    incid = _incidence(g)
    stubs = frag.stub_edges()
    acc = {phi: 0 for phi in itertools.product(range(n), repeat=k)}
    for kappa in itertools.product(range(n), repeat=len(g.edges)):
        prod = 1
        for v in range(k, g.vertex_count):
            vec = [0] * n
            for idx, mult in incid[v]:
                vec[kappa[idx]] += mult
            w = table[tuple(vec)]
            if not w:
                prod = 0
                break
            prod = prod * w
        if prod:
            phi = tuple(kappa[e] for e in stubs)
            acc[phi] = acc[phi] + prod
    factor = n ** g.free_loops
    entries = [
        _as_gauss(acc[phi]) * factor
        for phi in itertools.product(range(n), repeat=k)
    ]
    return FragmentTensor(n, k, entries)


def pair_partition(tg: FragmentTensor, th: FragmentTensor) -> GaussianRational:
    """Inner product over all boundary colorings; equals p_y of the gluing
    of the source fragments."""
    if tg.colors != th.colors or tg.arity != th.arity:
        raise ValueError("tensor shape mismatch")
    acc = ZERO
    for a, b in zip(tg.entries, th.entries):
        acc = acc + a * b
    return acc


def partition_function_contracted(
    y: VertexModel,
    g,
    order: Optional[Sequence[int]] = None,
    frontier_guard: int = 20,
) -> GaussianRational:
    """p_y(G) by vertex elimination with a frontier tensor over cut edges.

    Exactly equals partition_function for any elimination order.  The
    default order greedily minimizes the next frontier width; orders are
    configuration, not semantics.  Raises GuardExceeded when the frontier
    would exceed ``frontier_guard`` cut edges.
    """
    g = _plain_graph(g)
    _check_degrees(y, g)
    table = _polymorphic_table(y)
    n = y.colors
    nv = g.vertex_count
    edges = g.edges

    if order is not None:
        order = list(order)
        if sorted(order) != list(range(nv)):
            raise ValueError("order must be a permutation of the vertices")

    # per vertex: frontier candidates (non-loop edge ids) and loop edge ids
    plain_at = [[] for _ in range(nv)]
    loops_at = [[] for _ in range(nv)]
    for idx, (u, v) in enumerate(edges):
        if u == v:
            loops_at[u].append(idx)
        else:
            plain_at[u].append(idx)
            plain_at[v].append(idx)

    processed = [False] * nv
    frontier: tuple = ()  # edge ids with exactly one processed endpoint
    state = {(): 1}

    for step in range(nv):
        if order is not None:
            v = order[step]
            if processed[v]:
                raise ValueError("order repeats a vertex")
        else:
            v = _greedy_pick(nv, processed, frontier, plain_at)
        at_v = plain_at[v]
        incoming = set(e for e in at_v if e in frontier)
        outgoing = [
            e
            for e in at_v
            if not processed[edges[e][0] if edges[e][1] == v else edges[e][1]]
        ]
        pos_keep = []
        pos_in = []
        kept = []
        for i, e in enumerate(frontier):
            if e in incoming:
                pos_in.append(i)
            else:
                pos_keep.append(i)
                kept.append(e)
        new_frontier = tuple(kept) + tuple(sorted(outgoing))
        if len(new_frontier) > frontier_guard:
            raise GuardExceeded(
                f"frontier width {len(new_frontier)} exceeds guard {frontier_guard}"
            )
        n_out = len(outgoing)
        n_loop = len(loops_at[v])

        new_state = {}
        loop_choices = _color_tuples(n, n_loop)
        out_choices = _color_tuples(n, n_out)
        for key, val in state.items():
            base = [0] * n
            for i in pos_in:
                base[key[i]] += 1
            kept_key = tuple(key[i] for i in pos_keep)
            for beta in out_choices:
                for lam in loop_choices:
                    vec = list(base)
                    for c in beta:
                        vec[c] += 1
                    for c in lam:
                        vec[c] += 2
                    w = table[tuple(vec)]
                    if not w:
                        continue
                    nk = kept_key + beta
                    prev = new_state.get(nk)
                    new_state[nk] = val * w if prev is None else prev + val * w
        processed[v] = True
        frontier = new_frontier
        state = new_state
        if not state:
            return ZERO  # every continuation hit a zero weight
    total = state.get((), 0)
    return _as_gauss(total) * n ** g.free_loops


_COLOR_TUPLE_CACHE: dict = {}


def _color_tuples(n: int, count: int):
    key = (n, count)
    out = _COLOR_TUPLE_CACHE.get(key)
    if out is None:
        out = tuple(itertools.product(range(n), repeat=count))
        _COLOR_TUPLE_CACHE[key] = out
    return out


def _greedy_pick(nv, processed, frontier, plain_at):
    frontier_set = frozenset(frontier)
    width_now = len(frontier)
    best_v = -1
    best_width = None
    for v in range(nv):
        if processed[v]:
            continue
        width = width_now + len(plain_at[v])
        for e in plain_at[v]:
            if e in frontier_set:
                width -= 2
        if best_width is None or width < best_width:
            best_width = width
            best_v = v
    return best_v


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def _parse_rat(x) -> Fraction:
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise ValueError(f"rational values must be exact strings or integers, got {x!r}")


def model_to_json(y: VertexModel) -> dict:
    weights = []
    for vec in sorted(y.weights):
        w = y.weights[vec]
        if not w:
            continue
        weights.append(
            {"multiset": list(vec), "re": str(w.real), "im": str(w.imag)}
        )
    return {"colors": y.colors, "max_degree": y.max_degree, "weights": weights}


def model_from_json(data: dict) -> VertexModel:
    """{"colors": n, "max_degree": D, "weights": [{"multiset": [...],
    "re": "p/q", "im": "p/q"}, ...]}; omitted multisets default to 0."""
    if not isinstance(data, dict):
        raise ValueError("model JSON must be an object")
    colors = data.get("colors")
    max_degree = data.get("max_degree")
    if not isinstance(colors, int) or not isinstance(max_degree, int):
        raise ValueError("colors and max_degree must be integers")
    entries = data.get("weights", [])
    if not isinstance(entries, list):
        raise ValueError("weights must be a list")
    weights = {}
    for item in entries:
        if not isinstance(item, dict) or "multiset" not in item:
            raise ValueError(f"bad weight entry {item!r}")
        vec = item["multiset"]
        if not (isinstance(vec, list) and all(isinstance(c, int) for c in vec)):
            raise ValueError(f"bad multiset {vec!r}")
        try:
            re_part = _parse_rat(item.get("re", 0))
            im_part = _parse_rat(item.get("im", 0))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad weight value in {item!r}: {exc}") from None
        weights[tuple(vec)] = GaussianRational(re_part, im_part)
    return VertexModel(colors, max_degree, weights)

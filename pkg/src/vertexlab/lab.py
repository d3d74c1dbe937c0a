"""The experimental surface: fragment catalogs, connection matrices, the
rank-growth bound with its Gram factorization cross-check, the closure trace
tau, the gluing identity on tensor powers, the antisymmetrizer, and the
signed-sum pinning criterion.

Every check compares exact scalars; the pass/fail tolerance is identically
zero everywhere.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from vertexlab.errors import GuardExceeded
from vertexlab.exactalg import ExactMatrix, GaussianRational, ONE, ZERO, rank
from vertexlab.graphs import (
    Fragment,
    MultiGraph,
    Permutation,
    canonical_form,
    glue,
    fragment_product,
    perm_fragment,
    pin_edges,
    r_fragment,
    tensor_power,
    unit_fragment,
)
from vertexlab.models import (
    VertexModel,
    fragment_tensor,
    partition_function,
    partition_function_contracted,
)

Oracle = Callable[[MultiGraph], GaussianRational]


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckRow:
    experiment: str
    parameters: str
    lhs: str
    rhs: str
    passed: bool

    def tsv(self) -> str:
        outcome = "pass" if self.passed else "fail"
        return "\t".join([self.experiment, self.parameters, self.lhs, self.rhs, outcome])


class Report:
    """A batch of exact comparisons, printable as TSV or a JSON summary."""

    TSV_HEADER = "experiment\tparameters\tlhs\trhs\tresult"

    def __init__(self, rows: Sequence[CheckRow]):
        self.rows = list(rows)

    @property
    def passed(self) -> int:
        return sum(1 for r in self.rows if r.passed)

    @property
    def failed(self) -> int:
        return sum(1 for r in self.rows if not r.passed)

    def all_passed(self) -> bool:
        return self.failed == 0

    def first_failure(self) -> Optional[CheckRow]:
        for r in self.rows:
            if not r.passed:
                return r
        return None

    def to_tsv(self, header: bool = True) -> str:
        lines = [self.TSV_HEADER] if header else []
        lines.extend(r.tsv() for r in self.rows)
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "failed": self.failed,
            "details": [
                {
                    "experiment": r.experiment,
                    "parameters": r.parameters,
                    "lhs": r.lhs,
                    "rhs": r.rhs,
                    "passed": r.passed,
                }
                for r in self.rows
            ],
        }

    def __add__(self, other: "Report") -> "Report":
        return Report(self.rows + other.rows)


# ---------------------------------------------------------------------------
# catalogs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FragmentCatalog:
    arity: int
    items: Tuple[Fragment, ...]
    max_unlabeled: int
    max_edges: int

    def __post_init__(self):
        for f in self.items:
            if f.arity != self.arity:
                raise ValueError("catalog items must share the catalog arity")

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i):
        return self.items[i]


def _label_matchings(labels: List[int]):
    """Partial matchings on the label set; unmatched labels paired with None."""
    if not labels:
        yield []
        return
    a = labels[0]
    rest = labels[1:]
    for tail in _label_matchings(rest):
        yield [(a, None)] + tail
    for j, b in enumerate(rest):
        for tail in _label_matchings(rest[:j] + rest[j + 1 :]):
            yield [(a, b)] + tail


def enumerate_fragments(
    k: int,
    max_unlabeled: int = 4,
    max_edges: int = 6,
    guard_unlabeled: int = 6,
    guard_edges: int = 12,
    guard_arity: int = 8,
) -> FragmentCatalog:
    """Every fragment with k labeled stubs, up to the bounds, one per
    isomorphism class: at most max_unlabeled internal vertices, at most
    max_edges edges (stub edges included), and 0 or 1 free loops.

    Deterministic order: (vertex count, edge count, canonical form).
    """
    if k < 0 or max_unlabeled < 0 or max_edges < 0:
        raise ValueError("negative catalog bounds")
    if k > guard_arity or max_unlabeled > guard_unlabeled or max_edges > guard_edges:
        raise GuardExceeded(
            f"catalog bounds ({k}, {max_unlabeled}, {max_edges}) exceed guards "
            f"({guard_arity}, {guard_unlabeled}, {guard_edges})"
        )
    seen = {}
    for u in range(max_unlabeled + 1):
        nv = k + u
        internal = list(range(k, nv))
        internal_pairs = [
            (a, b) for i, a in enumerate(internal) for b in internal[i:]
        ]
        for matching in _label_matchings(list(range(k))):
            stub_edges = [(a, b) for a, b in matching if b is not None]
            dangling = [a for a, b in matching if b is None]
            if dangling and not internal:
                continue
            n_stub = len(stub_edges) + len(dangling)
            if n_stub > max_edges:
                continue
            target_iter = (
                itertools.product(internal, repeat=len(dangling))
                if dangling
                else [()]
            )
            for targets in target_iter:
                base = stub_edges + list(zip(dangling, targets))
                budget = max_edges - len(base)
                for extra_count in range(budget + 1):
                    for extra in itertools.combinations_with_replacement(
                        internal_pairs, extra_count
                    ):
                        edges = base + list(extra)
                        for fl in (0, 1):
                            frag = Fragment(MultiGraph(nv, edges, fl), range(k))
                            key = canonical_form(frag)
                            if key not in seen:
                                seen[key] = frag
    ordered = sorted(
        seen.items(),
        key=lambda kv: (kv[1].vertex_count, kv[1].graph.edge_count, kv[0]),
    )
    return FragmentCatalog(
        arity=k,
        items=tuple(f for _, f in ordered),
        max_unlabeled=max_unlabeled,
        max_edges=max_edges,
    )


# ---------------------------------------------------------------------------
# connection matrices and the rank bound
# ---------------------------------------------------------------------------

def _degree_sorted_key(g: MultiGraph) -> tuple:
    """Cache key after relabeling vertices by (degree, loop count).

    The relabeling is a bijection on g's own vertices, so equal keys imply
    isomorphic graphs (and hence equal partition functions); isomorphic
    graphs may still get distinct keys, which only costs a cache miss.
    """
    nv = g.vertex_count
    if nv == 0:
        return (0, g.edges, g.free_loops)
    degs = [0] * nv
    loopc = [0] * nv
    for u, v in g.edges:
        degs[u] += 1
        degs[v] += 1
        if u == v:
            loopc[u] += 1
    tagged = sorted((degs[v], loopc[v], v) for v in range(nv))
    pos = [0] * nv
    for newi, (_, _, old) in enumerate(tagged):
        pos[old] = newi
    relabeled = []
    for u, v in g.edges:
        a = pos[u]
        b = pos[v]
        relabeled.append((a, b) if a <= b else (b, a))
    relabeled.sort()
    return (nv, tuple(relabeled), g.free_loops)


def partition_oracle(
    y: VertexModel, frontier_guard: int = 20, contracted: bool = True
) -> Oracle:
    """A memoized graph -> p_y(graph) evaluator."""
    cache: dict = {}
    # with a single color the brute-force sum has exactly one term; the
    # contraction machinery would only add overhead
    use_contraction = contracted and y.colors > 1

    def f(g: MultiGraph) -> GaussianRational:
        key = _degree_sorted_key(g)
        val = cache.get(key)
        if val is None:
            if use_contraction:
                val = partition_function_contracted(y, g, frontier_guard=frontier_guard)
            else:
                val = partition_function(y, g)
            cache[key] = val
        return val

    return f


def connection_matrices(
    fs: Sequence[Oracle], catalog: FragmentCatalog
) -> List[ExactMatrix]:
    """C[G, H] = f(G.H) over the catalog, for several invariants at once
    (each pair is glued exactly once).  Gluing is symmetric, so the upper
    triangle is computed and mirrored."""
    items = catalog.items
    n = len(items)
    uppers = [{} for _ in fs]
    for i in range(n):
        gi = items[i]
        for j in range(i, n):
            glued = glue(gi, items[j])
            idx = i * n + j
            for upper, f in zip(uppers, fs):
                upper[idx] = f(glued)
    out = []
    for upper in uppers:
        entries = [
            upper[i * n + j] if i <= j else upper[j * n + i]
            for i in range(n)
            for j in range(n)
        ]
        out.append(ExactMatrix(n, n, entries))
    return out


def connection_matrix(f: Oracle, catalog: FragmentCatalog) -> ExactMatrix:
    """C[G, H] = f(G.H) over the catalog."""
    return connection_matrices([f], catalog)[0]


def gram_matrix(y: VertexModel, catalog: FragmentCatalog) -> ExactMatrix:
    """T with one column per catalog fragment: the boundary tensors."""
    n = y.colors
    k = catalog.arity
    cols = [fragment_tensor(y, frag).entries for frag in catalog.items]
    size = n ** k
    entries = [cols[j][i] for i in range(size) for j in range(len(cols))]
    return ExactMatrix(size, len(cols), entries)


def rank_bound_check(
    y: VertexModel, k: int, catalog: FragmentCatalog, frontier_guard: int = 20
) -> Report:
    """Verify rank(C_{p_y,k}) <= colors^k and the Gram identity C = T^T T."""
    return rank_bound_check_batch([y], k, catalog, frontier_guard)[0]


def rank_bound_check_batch(
    models: Sequence[VertexModel],
    k: int,
    catalog: FragmentCatalog,
    frontier_guard: int = 20,
) -> List[Report]:
    """rank_bound_check for several models over one catalog, sharing the
    gluing work between them."""
    if catalog.arity != k:
        raise ValueError(f"catalog arity {catalog.arity} != k={k}")
    oracles = [partition_oracle(y, frontier_guard) for y in models]
    cs = connection_matrices(oracles, catalog)
    reports = []
    for y, c in zip(models, cs):
        n = y.colors
        params = (
            f"n={n} k={k} catalog={len(catalog)} "
            f"bounds=({catalog.max_unlabeled},{catalog.max_edges})"
        )
        t = gram_matrix(y, catalog)
        gram = t.transpose() @ t
        if c == gram:
            gram_row = CheckRow("gram", params, "C", "T^T*T", True)
        else:
            mism = next(
                (i, j)
                for i in range(c.rows)
                for j in range(c.cols)
                if c[i, j] != gram[i, j]
            )
            gram_row = CheckRow(
                "gram",
                params + f" mismatch at {mism}",
                str(c[mism]),
                str(gram[mism]),
                False,
            )
        r = rank(c)
        bound = n ** k
        rank_row = CheckRow("rank_bound", params, str(r), f"<={bound}", r <= bound)
        reports.append(Report([gram_row, rank_row]))
    return reports


# ---------------------------------------------------------------------------
# linear combinations and the closure trace
# ---------------------------------------------------------------------------

class LinearCombo:
    """Formal Q(i)-linear combination of fragments of one arity."""

    __slots__ = ("terms", "arity")

    def __init__(self, terms: Sequence[Tuple]):
        terms = tuple(
            (c if isinstance(c, GaussianRational) else GaussianRational(c), f)
            for c, f in terms
        )
        if not terms:
            raise ValueError("empty linear combination has no arity")
        arity = terms[0][1].arity
        for _, f in terms:
            if f.arity != arity:
                raise ValueError("mixed arities in linear combination")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "arity", arity)

    def __setattr__(self, name, value):
        raise AttributeError("LinearCombo is immutable")

    def __len__(self):
        return len(self.terms)


def antisymmetrizer(k: int, guard: int = 7) -> LinearCombo:
    """q = sum over S_k of sgn(pi) r_pi, a combination of arity 2k."""
    if k < 1:
        raise ValueError("k must be positive")
    if k > guard:
        raise GuardExceeded(f"antisymmetrizer guard: k={k} > {guard}")
    return LinearCombo(
        [(pi.sign(), r_fragment(pi)) for pi in Permutation.all_of_degree(k)]
    )


def tau(y: VertexModel, x) -> GaussianRational:
    """Closure trace tau(x) = p_y(x . unit), extended linearly.

    Gluing against the unit closes the right boundary of x onto its left
    boundary; free loops created by the closure are traced exactly.
    """
    if isinstance(x, Fragment):
        x = LinearCombo([(ONE, x)])
    if not isinstance(x, LinearCombo):
        raise TypeError("tau needs a Fragment or LinearCombo")
    if x.arity % 2:
        raise ValueError(f"tau needs even arity, got {x.arity}")
    one = unit_fragment(x.arity // 2)
    total = ZERO
    for coeff, frag in x.terms:
        total = total + coeff * partition_function(y, glue(frag, one))
    return total


def _fragment_power(x: Fragment, s: int) -> Fragment:
    if s < 1:
        raise ValueError("power must be >= 1")
    out = x
    for _ in range(s - 1):
        out = fragment_product(out, x)
    return out


def glue_identity_check(
    y: VertexModel, x: Fragment, m: int, rho: Permutation, sigma: Permutation
) -> Report:
    """Check p_y(x^{(x)m} P_{k,rho} . P_{k,sigma}) = prod over orbits c of
    rho sigma^-1 of tau(x^{|c|})."""
    if x.arity % 2:
        raise ValueError("x must have even arity")
    if rho.degree != m or sigma.degree != m:
        raise ValueError("rho and sigma must permute [m]")
    k = x.arity // 2
    xm = tensor_power(x, m)
    left = fragment_product(xm, perm_fragment(k, rho))
    lhs = partition_function(y, glue(left, perm_fragment(k, sigma)))
    rhs = ONE
    for orbit in rho.then(sigma.inverse()).orbits():
        rhs = rhs * tau(y, _fragment_power(x, len(orbit)))
    params = f"k={k} m={m} rho={list(rho.images)} sigma={list(sigma.images)}"
    return Report([CheckRow("glueid", params, str(lhs), str(rhs), lhs == rhs)])


# ---------------------------------------------------------------------------
# the signed-sum pinning criterion
# ---------------------------------------------------------------------------

def criterion_check(
    y: VertexModel, g: MultiGraph, u_set: Sequence[int], s, evaluator: Optional[Oracle] = None
) -> GaussianRational:
    """Sum over permutations pi of U of sgn(pi) p_y(G_{s o pi}).

    Vanishes whenever |U| >= colors + 1; arbitrary |U| allowed for
    exploration.
    """
    u = list(u_set)
    t = len(u)
    f = evaluator if evaluator is not None else (lambda graph: partition_function(y, graph))
    total = ZERO
    for pi in Permutation.all_of_degree(t):
        mapping = {u[j - 1]: s[u[pi(j) - 1]] for j in range(1, t + 1)}
        total = total + pi.sign() * f(pin_edges(g, u, mapping))
    return total


def random_criterion_instance(rng: random.Random, u_size: int, max_vertices: int = 5, max_edges: int = 4):
    """A random (graph, U, s) pinning instance for the signed-sum check."""
    nv = rng.randint(u_size, max(u_size, max_vertices))
    n_edges = rng.randint(0, max_edges)
    edges = [
        (rng.randrange(nv), rng.randrange(nv)) for _ in range(n_edges)
    ]
    g = MultiGraph(nv, edges)
    u = rng.sample(range(nv), u_size)
    s = {v: rng.randrange(nv) for v in u}
    return g, u, s


def criterion_random_report(
    y: VertexModel,
    instances: int,
    seed: int,
    u_size: Optional[int] = None,
    max_vertices: int = 5,
    max_edges: int = 4,
) -> Report:
    """Randomized vanishing checks; |U| defaults to colors + 1."""
    t = y.colors + 1 if u_size is None else u_size
    rng = random.Random(seed)
    rows = []
    for idx in range(instances):
        g, u, s = random_criterion_instance(rng, t, max_vertices, max_edges)
        val = criterion_check(y, g, u, s)
        params = (
            f"n={y.colors} instance={idx} vertices={g.vertex_count} "
            f"edges={list(g.edges)} U={u} s={[s[v] for v in u]}"
        )
        expect = "0" if t >= y.colors + 1 else "?"
        rows.append(
            CheckRow("criterion", params, str(val), expect, val == ZERO or expect == "?")
        )
    return Report(rows)


# ---------------------------------------------------------------------------
# kernel membership of the antisymmetrizer
# ---------------------------------------------------------------------------

def antisym_kernel_check(
    y: VertexModel, catalog: FragmentCatalog
) -> Report:
    """For k = colors + 1 and every H in the catalog, the signed sum over
    S_k of p_y(r_pi . H) must vanish exactly."""
    k = y.colors + 1
    if catalog.arity != 2 * k:
        raise ValueError(
            f"catalog arity {catalog.arity} != 2(colors+1) = {2 * k}"
        )
    perms = Permutation.all_of_degree(k)
    signed = [(pi.sign(), r_fragment(pi)) for pi in perms]
    rows = []
    for idx, h in enumerate(catalog):
        total = ZERO
        for sign, rpi in signed:
            total = total + sign * partition_function(y, glue(rpi, h))
        rows.append(
            CheckRow(
                "kernelq",
                f"n={y.colors} k={k} H#{idx} vertices={h.vertex_count} "
                f"edges={h.graph.edge_count} free_loops={h.free_loops}",
                str(total),
                "0",
                total == ZERO,
            )
        )
    return Report(rows)

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from vertexlab.errors import DegreeOverflow, GuardExceeded
from vertexlab.exactalg import GaussianRational, I, ONE, ZERO, gq
from vertexlab.graphs import (
    EMPTY_GRAPH,
    FREE_LOOP,
    Fragment,
    MultiGraph,
    disjoint_union,
    glue,
    unit_fragment,
)
from vertexlab.models import (
    FragmentTensor,
    VertexModel,
    fragment_tensor,
    matchings_model,
    model_from_json,
    model_to_json,
    ones_model,
    pair_partition,
    parity_model,
    partition_function,
    partition_function_contracted,
)

X = unit_fragment(1)


def star2():
    return Fragment(MultiGraph(3, [(0, 2), (1, 2)]), (0, 1))


def path(n):
    return MultiGraph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return MultiGraph(n, [(i, (i + 1) % n) for i in range(n)])


def count_matchings(g: MultiGraph) -> int:
    """Independent oracle: enumerate subsets of edges, keep the matchings.
    A loop covers its vertex twice, so it can never be in a matching."""
    count = 0
    for r in range(len(g.edges) + 1):
        for subset in itertools.combinations(range(len(g.edges)), r):
            covered = []
            for e in subset:
                u, v = g.edges[e]
                covered.append(u)
                covered.append(v)
            if len(set(covered)) == len(covered):
                count += 1
    return count


# -- VertexModel basics -------------------------------------------------------

def test_model_table_is_total():
    y = VertexModel(2, 2, {(1, 1): ONE})
    assert y.weight((0, 0)) == ZERO
    assert y.weight((1, 1)) == ONE


def test_model_rejects_bad_entries():
    with pytest.raises(ValueError):
        VertexModel(0, 2, {})
    with pytest.raises(ValueError):
        VertexModel(2, 1, {(1, 1): ONE})  # size beyond max_degree
    with pytest.raises(ValueError):
        VertexModel(2, 3, {(1,): ONE})  # wrong vector length


def test_weight_beyond_degree_is_error():
    y = matchings_model(2)
    with pytest.raises(DegreeOverflow):
        y.weight((3, 0))


# -- brute-force partition function --------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_free_loop_counts_colors(n):
    y = ones_model(n, 0)
    assert partition_function(y, FREE_LOOP) == gq(n)


def test_empty_graph_is_one():
    assert partition_function(matchings_model(3), EMPTY_GRAPH) == ONE


@pytest.mark.parametrize("g", [path(3), cycle(4), MultiGraph(2, [(0, 1), (0, 1)])])
def test_all_ones_counts_colorings(g):
    for n in (1, 2, 3):
        y = ones_model(n, 4)
        assert partition_function(y, g) == gq(n ** g.edge_count)


def test_matchings_path3():
    # oracle: matchings of P3 are {}, {e1}, {e2}
    assert count_matchings(path(3)) == 3
    assert partition_function(matchings_model(2), path(3)) == gq(3)


def test_matchings_equals_enumeration_oracle():
    graphs = [
        path(4),
        cycle(5),
        MultiGraph(3, [(0, 1), (0, 1), (1, 2)]),
        MultiGraph(2, [(0, 0), (0, 1)]),
        MultiGraph(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]),
    ]
    for g in graphs:
        y = matchings_model(max(g.degrees(), default=0))
        assert partition_function(y, g) == gq(count_matchings(g))


def test_parity_triangle():
    assert partition_function(parity_model(2), cycle(3)) == gq(-1)


@pytest.mark.parametrize(
    "g",
    [path(3), cycle(4), MultiGraph(1, [(0, 0)]), MultiGraph(2, [(0, 1), (0, 1), (1, 1)])],
)
def test_parity_is_minus_one_to_edge_count(g):
    y = parity_model(max(g.degrees(), default=0))
    assert partition_function(y, g) == gq((-1) ** g.edge_count)


def test_degree_overflow():
    with pytest.raises(DegreeOverflow):
        partition_function(matchings_model(1), path(3))


def test_free_loop_multiplies():
    y = matchings_model(2)
    g = path(3)
    with_loop = MultiGraph(3, g.edges, free_loops=1)
    assert partition_function(y, with_loop) == gq(2) * partition_function(y, g)


def test_multiplicative_over_disjoint_union():
    pool = [path(2), path(3), cycle(3), MultiGraph(1, [(0, 0)]), FREE_LOOP]
    for n in (1, 2, 3):
        y = ones_model(n, 2) if n != 2 else matchings_model(2)
        for g, h in itertools.product(pool, repeat=2):
            lhs = partition_function(y, disjoint_union(g, h))
            assert lhs == partition_function(y, g) * partition_function(y, h)


def test_free_loop_union_scales_by_colors():
    for n in (1, 2, 3):
        y = ones_model(n, 2)
        for g in (path(3), cycle(3), EMPTY_GRAPH):
            lhs = partition_function(y, disjoint_union(FREE_LOOP, g))
            assert lhs == gq(n) * partition_function(y, g)


def test_isomorphism_invariance():
    t1 = MultiGraph(3, [(0, 1), (1, 2), (0, 2)])
    t2 = MultiGraph(3, [(2, 1), (0, 1), (2, 0)])
    y = matchings_model(2)
    assert partition_function(y, t1) == partition_function(y, t2)


# -- fragment tensors ------------------------------------------------------------

def test_tensor_of_bare_edge():
    y = matchings_model(2)
    t = fragment_tensor(y, X)
    for phi in itertools.product(range(2), repeat=2):
        assert t.entry(phi) == (ONE if phi[0] == phi[1] else ZERO)


def test_tensor_of_star_is_weight_table():
    y = VertexModel(2, 2, {(2, 0): gq(5), (1, 1): I, (0, 2): gq(Fraction(1, 3))})
    t = fragment_tensor(y, star2())
    assert t.entry((0, 0)) == gq(5)
    assert t.entry((0, 1)) == I
    assert t.entry((1, 0)) == I
    assert t.entry((1, 1)) == gq(Fraction(1, 3))


def test_tensor_of_arity_zero_is_partition_function():
    tri = Fragment(cycle(3), ())
    y = matchings_model(2)
    t = fragment_tensor(y, tri)
    assert t.arity == 0
    assert t.entry(()) == partition_function(y, cycle(3))


def test_tensor_carries_free_loops():
    f = Fragment(MultiGraph(2, [(0, 1)], free_loops=1), (0, 1))
    y = matchings_model(2)
    t = fragment_tensor(y, f)
    assert t.entry((0, 0)) == gq(2)


def test_pair_partition_of_x_with_itself():
    y = matchings_model(2)
    t = fragment_tensor(y, X)
    assert pair_partition(t, t) == gq(2)
    assert partition_function(y, glue(X, X)) == gq(2)


def test_pair_partition_zero_tensor():
    z = FragmentTensor(2, 1, [ZERO, ZERO])
    t = FragmentTensor(2, 1, [ONE, I])
    assert pair_partition(z, t) == ZERO


def test_pair_partition_shape_mismatch():
    with pytest.raises(ValueError):
        pair_partition(FragmentTensor(2, 1, [1, 2]), FragmentTensor(2, 2, [1, 2, 3, 4]))


def test_gram_consistency_small():
    frags = [X, star2(), Fragment(MultiGraph(3, [(0, 2), (1, 2), (2, 2)]), (0, 1))]
    for y in (matchings_model(4), ones_model(3, 4)):
        for g, h in itertools.product(frags, repeat=2):
            lhs = pair_partition(fragment_tensor(y, g), fragment_tensor(y, h))
            assert lhs == partition_function(y, glue(g, h))


# -- contracted evaluation ---------------------------------------------------------

def contraction_pool():
    return [
        EMPTY_GRAPH,
        FREE_LOOP,
        path(3),
        path(5),
        cycle(4),
        cycle(5),
        MultiGraph(1, [(0, 0)]),
        MultiGraph(3, [(0, 1), (0, 1), (1, 2), (2, 2)]),
        MultiGraph(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3)]),
        MultiGraph(3, [(0, 1)], free_loops=2),
        MultiGraph(2, []),
    ]


def test_contracted_agrees_with_brute_force():
    for g in contraction_pool():
        dmax = max(g.degrees(), default=0)
        for y in (matchings_model(max(2, dmax)), ones_model(3, max(2, dmax)), parity_model(max(2, dmax))):
            assert partition_function_contracted(y, g) == partition_function(y, g)


def test_contracted_cycle_all_ones():
    y = ones_model(2, 2)
    for m in (3, 4, 5, 6):
        assert partition_function_contracted(y, cycle(m)) == gq(2 ** m)


def test_contracted_matchings_c5_is_lucas():
    assert count_matchings(cycle(5)) == 11
    assert partition_function_contracted(matchings_model(2), cycle(5)) == gq(11)


def test_contracted_order_independent():
    g = MultiGraph(4, [(0, 1), (1, 2), (2, 3), (0, 3), (1, 3)])
    y = matchings_model(3)
    want = partition_function(y, g)
    for order in itertools.permutations(range(4)):
        assert partition_function_contracted(y, g, order=order) == want


def test_contracted_rejects_bad_order():
    y = matchings_model(2)
    with pytest.raises(ValueError):
        partition_function_contracted(y, path(3), order=[0, 1])
    with pytest.raises(ValueError):
        partition_function_contracted(y, path(3), order=[0, 0, 1])


def test_frontier_guard():
    star = MultiGraph(5, [(0, i) for i in range(1, 5)])
    y = ones_model(2, 4)
    with pytest.raises(GuardExceeded):
        partition_function_contracted(y, star, order=[1, 2, 3, 4, 0], frontier_guard=3)


def test_contracted_degree_check():
    with pytest.raises(DegreeOverflow):
        partition_function_contracted(matchings_model(1), path(3))


# -- model JSON ----------------------------------------------------------------------

def test_model_json_roundtrip():
    y = VertexModel(2, 2, {(1, 1): gq(Fraction(-3, 2), Fraction(1, 2)), (2, 0): ONE})
    again = model_from_json(model_to_json(y))
    assert again.colors == y.colors
    assert again.max_degree == y.max_degree
    assert again.weights == y.weights


def test_model_json_defaults():
    y = model_from_json({"colors": 2, "max_degree": 1, "weights": [{"multiset": [1, 0]}]})
    assert y.weight((1, 0)) == ZERO
    assert y.weight((0, 0)) == ZERO


def test_model_json_integer_values_accepted():
    y = model_from_json(
        {"colors": 1, "max_degree": 1, "weights": [{"multiset": [1], "re": 2}]}
    )
    assert y.weight((1,)) == gq(2)


def test_model_json_rejects_floats_and_garbage():
    for bad in [
        "x",
        {"colors": "2", "max_degree": 1},
        {"colors": 1, "max_degree": 1, "weights": [{"multiset": [1], "re": 1.5}]},
        {"colors": 1, "max_degree": 1, "weights": [{"re": "1"}]},
        {"colors": 1, "max_degree": 1, "weights": [{"multiset": [1], "re": "1/0"}]},
    ]:
        with pytest.raises(ValueError):
            model_from_json(bad)

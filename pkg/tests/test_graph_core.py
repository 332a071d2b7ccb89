import functools
import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodgecorr.graph_core import (
    CanonicalGraph,
    GraphError,
    Label,
    alphabet,
    automorphism_count,
    canon_component,
    canonicalize,
    enumerate_graphs,
    from_vertex_form,
    graph_from_json,
    graph_stats,
    graph_to_json,
    is_zero_pattern,
    permutation_sign,
    validate_graph,
    zero_pattern,
)

S1, S2, S3, S4 = (Label("s", i).code for i in (1, 2, 3, 4))
A1, B1 = Label("hol", 1).code, Label("antihol", 1).code


def brute_aut(labels, edges):
    """Half-edge automorphisms counted by trying every vertex bijection and every edge bijection."""
    n = len(labels)
    count = 0
    for perm in itertools.permutations(range(n)):
        if any(labels[perm[v]] != labels[v] for v in range(n)):
            continue
        image = sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges)
        if image != sorted(tuple(sorted(e)) for e in edges):
            continue
        # each edge class of multiplicity m contributes m! edge bijections, each self-loop a flip
        w = 1
        for e in set(image):
            m = image.count(e)
            w *= math.factorial(m) * (2**m if e[0] == e[1] else 1)
        count += w
    return count


@functools.lru_cache(maxsize=None)
def brute_key(labels, edges):
    """Lexicographically least relabelled (labels, sorted edges): an isomorphism-class oracle."""
    best = None
    n = len(labels)
    for perm in itertools.permutations(range(n)):
        lab = [0] * n
        for v in range(n):
            lab[perm[v]] = labels[v]
        es = sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges)
        cand = (tuple(lab), tuple(es))
        if best is None or cand < best:
            best = cand
    return best


# graphs of the worked automorphism example: legs (s, s, s', alpha), the 4-cycle with a chord, and
# the double-edge graph with legs (s, alpha, alpha-bar)
GAMMA1 = ([0, 0, S1, S1, S2, A1], [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)])
GAMMA2 = ([0, 0, 0, 0, S1, S1], [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3), (0, 4), (2, 5)])
GAMMA3 = ([0, 0, 0, S1, A1, B1], [(0, 4), (0, 5), (0, 1), (1, 2), (1, 2), (2, 3)])


@pytest.mark.parametrize("graph, expected", [(GAMMA1, 2), (GAMMA2, 4), (GAMMA3, 2)])
def test_example_automorphism_counts(graph, expected):
    g = from_vertex_form(*graph)
    assert automorphism_count(g) == expected
    assert brute_aut(*graph) == expected


def test_single_edge_distinct_labels():
    g = from_vertex_form([S1, S2], [(0, 1)])
    assert automorphism_count(g) == 1
    assert g.graph.n_edges == 1 and g.graph.half_edges == 2


def test_three_star_shape():
    g = from_vertex_form([0, S1, S2, S3], [(0, 1), (0, 2), (0, 3)]).graph
    assert (g.half_edges, g.n_edges, g.n_internal) == (6, 3, 1)


def test_four_valent_rejected():
    raw = graph_to_json(from_vertex_form([0, S1, S2, S3, S4], [(0, 1), (0, 2), (0, 3), (0, 4)]))
    with pytest.raises(GraphError, match="non-trivalent"):
        validate_graph(raw)
    assert validate_graph(raw, trivalent=False).n_internal == 1


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda d: d["matching"].append([0, 1]), "appears in"),
        (lambda d: d.update(half_edges=d["half_edges"] + 1), "not matched"),
        (lambda d: d["external"].pop(), "no vertex"),
        (lambda d: d["matching"].__setitem__(0, [0, 0]), "fixed point"),
    ],
)
def test_validate_errors(mutate, message):
    d = graph_to_json(from_vertex_form([0, S1, S2, S3], [(0, 1), (0, 2), (0, 3)]))
    mutate(d)
    with pytest.raises(GraphError, match=message):
        validate_graph(d)


def test_json_round_trip():
    g = from_vertex_form(*GAMMA2)
    back = graph_from_json(graph_to_json(g))
    assert canonicalize(back) == canonicalize(g)


def test_relabelled_star_same_canonical_form():
    a = from_vertex_form([0, S1, S2, S3], [(0, 1), (0, 2), (0, 3)])
    b = from_vertex_form([S3, S1, 0, S2], [(2, 1), (2, 0), (2, 3)])
    assert canonicalize(a)[0] == canonicalize(b)[0]


def test_transposed_edges_flip_sign():
    labels, edges = GAMMA1
    c1, s1 = canonicalize(from_vertex_form(labels, edges))
    swapped = [edges[1], edges[0]] + edges[2:]
    c2, s2 = canonicalize(from_vertex_form(labels, swapped))
    assert c1 == c2 and s1 == -s2


@pytest.mark.parametrize(
    "labels, edges, stats",
    [
        ([S1, S2], [(0, 1)], (0, -1, 0, 1)),
        ([0, 0, S1, S2, S3, S4], [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)], (0, -1, 0, 1)),
        ([0, 0, 0, S1, S2, S3], [(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (2, 5)], (0, 0, 1, 0)),
        ([0, S1, S2, S3, S4], [(0, 1), (0, 2), (0, 3), (0, 4)], (1, -1, 0, 2)),
    ],
)
def test_graph_stats(labels, edges, stats):
    assert tuple(graph_stats(from_vertex_form(labels, edges).graph)) == stats


@pytest.mark.parametrize(
    "labels, edges, zero",
    [
        ([0, S1, S2], [(0, 0), (0, 1), (0, 2)], True),
        ([0, 0, S1, S1, S2, S3], [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)], True),
        ([0, S1, S2, S3], [(0, 1), (0, 2), (0, 3)], False),
        ([S1, S1], [(0, 1)], True),
    ],
)
def test_zero_patterns(labels, edges, zero):
    assert is_zero_pattern(from_vertex_form(labels, edges).graph) is zero


@pytest.mark.parametrize("n, expected", [(2, 1), (3, 1), (4, 3), (5, 15), (6, 105)])
def test_tree_count_distinct_legs(n, expected):
    legs = [Label("s", i) for i in range(1, n + 1)]
    assert len(enumerate_graphs(legs, 0, 100)) == expected == math.prod(range(1, 2 * n - 4, 2))


def brute_one_loop(codes):
    """Independent one-loop generator: every perfect matching of half-edges on a fixed vertex set."""
    n = len(codes)
    # a uni-trivalent one-loop graph with n legs has n internal vertices and 2n edges
    hs = list(range(4 * n))
    int_of = {h: h // 3 for h in range(3 * n)}
    ext_of = {3 * n + i: n + i for i in range(n)}
    owner = {**int_of, **ext_of}
    labels = [0] * n + list(codes)
    out = set()

    def matchings(rest):
        if not rest:
            yield []
            return
        a = rest[0]
        for i in range(1, len(rest)):
            b = rest[i]
            for m in matchings(rest[1:i] + rest[i + 1 :]):
                yield [(a, b)] + m

    for m in matchings(hs):
        edges = [(owner[a], owner[b]) for a, b in m]
        if any(labels[a] and labels[b] for a, b in edges):
            continue
        adj = {v: set() for v in range(2 * n)}
        for a, b in edges:
            adj[a].add(b)
            adj[b].add(a)
        seen, stack = {0}, [0]
        while stack:
            v = stack.pop()
            for w in adj[v] - seen:
                seen.add(w)
                stack.append(w)
        if len(seen) != 2 * n:
            continue
        c = canon_component(labels, edges)
        if zero_pattern(labels, edges) is None and not c.odd:
            out.add(c.key)
    return out


def test_one_loop_enumeration_matches_matching_oracle():
    codes = [S1, S2, S3]
    got = {g.key for g in enumerate_graphs(codes, 1, 100) if len(g.edges) == 6}
    assert got == brute_one_loop(codes)
    assert got


def random_relabel(rng, labels, edges):
    n = len(labels)
    perm = list(range(n))
    rng.shuffle(perm)
    new_labels = [0] * n
    for v in range(n):
        new_labels[perm[v]] = labels[v]
    order = list(range(len(edges)))
    rng.shuffle(order)
    new_edges = []
    for i in order:
        a, b = edges[i]
        a, b = perm[a], perm[b]
        new_edges.append((a, b) if rng.random() < 0.5 else (b, a))
    return new_labels, new_edges, permutation_sign(order)


POOL = [g.key for g in enumerate_graphs([S1, S2, S3, A1], 1, 8)] + [
    (tuple(GAMMA1[0]), tuple(GAMMA1[1])),
    (tuple(GAMMA2[0]), tuple(GAMMA2[1])),
]


@settings(max_examples=300, deadline=None)
@given(idx=st.integers(0, len(POOL) - 1), seed=st.integers(0, 2**32 - 1))
def test_canonicalize_isomorphism_invariant(idx, seed):
    labels, edges = POOL[idx]
    rng = random.Random(seed)
    l2, e2, sigma = random_relabel(rng, list(labels), list(edges))
    c1 = canon_component(labels, edges)
    c2 = canon_component(l2, e2)
    assert c1.key == c2.key
    # signs compose: the relabelled order differs from the original by sigma
    assert c2.sign == c1.sign * sigma or c1.odd
    assert c1.aut == c2.aut


@pytest.mark.parametrize("key", POOL[:12] + POOL[-2:])
def test_canonical_key_classes_match_brute_force(key):
    labels, edges = key
    assert canon_component(labels, edges).aut == brute_aut(labels, edges)
    # two graphs share a canonical key iff they share the brute-force key
    mine = brute_key(tuple(labels), tuple(map(tuple, edges)))
    for other in POOL[:12]:
        same = canon_component(*other).key == canon_component(labels, edges).key
        assert same == (brute_key(*other) == mine)


def test_canonicalize_idempotent():
    for key in POOL:
        c = canon_component(*key)
        again = canon_component(*c.key)
        assert again.key == c.key and again.sign == 1


def test_enumeration_is_sorted_and_nonzero():
    gs = enumerate_graphs([S1, S2, S3, S4], 1, 8)
    assert [g.key for g in gs] == sorted(g.key for g in gs)
    assert all(isinstance(g, CanonicalGraph) and not is_zero_pattern(g) for g in gs)


def test_alphabet():
    assert alphabet(2, 1) == sorted([S1, S2, A1, B1])
    with pytest.raises(GraphError):
        Label("x", 1)

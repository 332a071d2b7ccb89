from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodgecorr.graph_complex import (
    GraphVector,
    d_cas,
    d_delta,
    d_s,
    d_total,
    n_edges,
    wedge,
)
from hodgecorr.graph_core import Label, alphabet, enumerate_decorated_graphs, enumerate_graphs, permutation_sign

S1, S2, S3, S4 = (Label("s", i).code for i in (1, 2, 3, 4))
A1, B1 = Label("hol", 1).code, Label("antihol", 1).code

EDGE12 = GraphVector.from_graph([S1, S2], [(0, 1)])
STAR = GraphVector.from_graph([0, S1, S2, S3], [(0, 1), (0, 2), (0, 3)])
TREE4 = GraphVector.from_graph([0, 0, S1, S2, S3, S4], [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)])

TREES = [GraphVector.from_canonical(g) for g in enumerate_graphs([S1, S2, S3, A1], 1, 7)]
MIXED = [GraphVector.from_canonical(g) for g in enumerate_decorated_graphs(alphabet(2, 1), 5)]


def edge_parity(v: GraphVector) -> int:
    (mono,) = v.terms
    return n_edges(mono) & 1


def test_unit_and_zero():
    assert wedge(GraphVector.unit(), STAR) == STAR
    assert d_total(GraphVector(), 1) == 0


def test_odd_tree_squares_to_zero():
    # a 4-leg tree has 5 edges
    assert wedge(TREE4, TREE4) == 0
    assert wedge(EDGE12, EDGE12) == 0


@settings(max_examples=60, deadline=None)
@given(i=st.integers(0, len(TREES) - 1), j=st.integers(0, len(TREES) - 1))
def test_wedge_graded_commutative(i, j):
    a, b = TREES[i], TREES[j]
    sign = -1 if edge_parity(a) and edge_parity(b) else 1
    assert wedge(a, b) == wedge(b, a) * sign


def contract_oracle(labels, edges):
    """Contract each internal edge; orientation by moving that edge to the front of the order."""
    out = GraphVector()
    for p, (a, b) in enumerate(edges):
        if labels[a] or labels[b]:
            continue
        order = [p] + [q for q in range(len(edges)) if q != p]
        sign = permutation_sign(order)
        merged = [(a if x == b else x, a if y == b else y) for q, (x, y) in enumerate(edges) if q != p]
        keep = [v for v in range(len(labels)) if v != b]
        idx = {v: i for i, v in enumerate(keep)}
        out.add_graph([labels[v] for v in keep], [(idx[x], idx[y]) for x, y in merged], sign)
    return out


@pytest.mark.parametrize(
    "labels, edges",
    [
        ([0, S1, S2, S3], [(0, 1), (0, 2), (0, 3)]),
        ([0, 0, S1, S2, S3, S4], [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]),
        ([0, 0, S1, S2, S3, S4], [(0, 2), (0, 3), (0, 1), (1, 4), (1, 5)]),
        ([0, 0, 0, S1, S2, S3], [(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (2, 5)]),
        ([0, 0, 0, 0, S1, S2, S3, A1, B1], [(0, 1), (1, 2), (2, 3), (0, 4), (0, 5), (1, 6), (2, 7), (3, 8)]),
    ],
)
def test_d_delta_matches_contraction_oracle(labels, edges):
    assert d_delta(GraphVector.from_graph(labels, edges)) == contract_oracle(labels, edges)


def test_d_delta_small_cases():
    assert d_delta(STAR) == 0
    # the internal edge is first, so no reordering sign
    assert d_delta(TREE4) == GraphVector.from_graph([0, S1, S2, S3, S4], [(0, 1), (0, 2), (0, 3), (0, 4)])


def test_d_cas_genus_zero_vanishes():
    for v in TREES[:20]:
        assert d_cas(v, 0) == 0


def test_d_cas_single_edge():
    expected = GraphVector.from_graph([S1, A1, B1, S2], [(0, 1), (2, 3)]) - GraphVector.from_graph(
        [S1, B1, A1, S2], [(0, 1), (2, 3)]
    )
    assert d_cas(EDGE12, 1) == expected


def test_d_cas_on_triangle_gives_five_leg_trees():
    tri = GraphVector.from_graph([0, 0, 0, S1, S2, S3], [(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (2, 5)])
    out = d_cas(tri, 1)
    connected = {m: c for m, c in out.terms.items() if len(m) == 1}
    for (key,) in connected:
        labels = sorted(c for c in key[0] if c)
        assert labels == sorted([S1, S2, S3, A1, B1])
        assert len(key[1]) == 7


def test_d_s_edge_is_zero():
    assert d_s(EDGE12) == 0


def test_d_s_star():
    out = d_s(STAR)
    assert len(out) == 3
    for mono, c in out:
        assert len(mono) == 2 and abs(c) == 1
    one = d_s(GraphVector.from_graph([0, S1, S2, S3], [(0, 1), (0, 2), (0, 3)]))
    cut_s1 = GraphVector.from_graph([S2, S1, S3, S1], [(1, 0), (3, 2)])
    assert one[next(iter(cut_s1.terms))] == cut_s1[next(iter(cut_s1.terms))]


@pytest.mark.parametrize("op, change", [("delta", -1), ("s", -1), ("cas", 1)])
def test_edge_count_changes(op, change):
    for v in MIXED:
        (mono,) = v.terms
        image = {"delta": d_delta(v), "s": d_s(v), "cas": d_cas(v, 1)}[op]
        for m in image.terms:
            assert n_edges(m) == n_edges(mono) + change


@pytest.mark.parametrize("genus", [0, 1])
def test_square_zero_small(genus):
    for g in enumerate_decorated_graphs(alphabet(3, genus), 6):
        v = GraphVector.from_canonical(g)
        assert d_total(d_total(v, genus), genus) == 0
        assert d_delta(d_delta(v)) == 0


def test_cas_anticommutes_with_the_rest():
    for g in enumerate_decorated_graphs(alphabet(2, 1), 6):
        v = GraphVector.from_canonical(g)
        rest = lambda x: d_delta(x) + d_s(x)  # noqa: E731
        assert d_cas(rest(v), 1) + rest(d_cas(v, 1)) == 0


@settings(max_examples=50, deadline=None)
@given(i=st.integers(0, len(MIXED) - 1), j=st.integers(0, len(MIXED) - 1), op=st.sampled_from(["delta", "s", "cas"]))
def test_graded_leibniz(i, j, op):
    d = {"delta": d_delta, "s": d_s, "cas": lambda x: d_cas(x, 1)}[op]
    a, b = MIXED[i], MIXED[j]
    sign = -1 if edge_parity(a) else 1
    assert d(wedge(a, b)) == wedge(d(a), b) + wedge(a, d(b)) * sign


@settings(max_examples=40, deadline=None)
@given(
    coeffs=st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=3, max_size=3),
    idx=st.lists(st.integers(0, len(MIXED) - 1), min_size=3, max_size=3),
)
def test_d_total_linear(coeffs, idx):
    vs = [MIXED[i] * c for i, c in zip(idx, coeffs)]
    total = vs[0] + vs[1] + vs[2]
    assert d_total(total, 1) == d_total(vs[0], 1) + d_total(vs[1], 1) + d_total(vs[2], 1)


def test_json_round_trip():
    v = wedge(EDGE12, STAR) * Fraction(3, 2) + TREE4
    assert GraphVector.from_json(v.to_json()) == v

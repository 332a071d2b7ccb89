import itertools
import math
from fractions import Fraction

import pytest

from hodgecorr.graph_complex import GraphVector
from hodgecorr.graph_core import Label, alphabet, canonicalize, enumerate_graphs, from_vertex_form
from hodgecorr.graph_homology import (
    SIGNS,
    IhxClass,
    bracket_vector,
    cut_parts,
    delta_vector,
    dual_bracket,
    dual_delta,
    dual_key,
    get_context,
    ihx_reduce,
    inner_product,
    reduce_vector,
    resolutions,
    weighted_relator,
)

S1, S2, S3, S4 = (Label("s", i).code for i in (1, 2, 3, 4))
A1, B1 = Label("hol", 1).code, Label("antihol", 1).code


def vec(labels, edges):
    return GraphVector.from_graph(labels, edges)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_tree_quotient_dimension(n):
    # trivalent trees with n distinct legs modulo IHX span a space of dimension (n-2)!
    ctx = get_context(tuple(Label("s", i).code for i in range(1, n + 1)), 0)
    assert ctx.dimension == math.factorial(n - 2)
    assert len(ctx.basis) == math.prod(range(1, 2 * n - 4, 2))


def test_ihx_relation_vanishes():
    four = ([0, S1, S2, S3, S4], [(0, 1), (0, 2), (0, 3), (0, 4)])
    terms = resolutions(canonicalize(from_vertex_form(*four))[0].key)
    total = GraphVector()
    for lab, ed, c in terms:
        total.add_graph(lab, ed, c)
    assert len(total) == 3
    assert reduce_vector(total).is_zero()


def test_single_tree_outside_relations_is_itself():
    star = vec([0, S1, S2, S3], [(0, 1), (0, 2), (0, 3)])
    assert reduce_vector(star).representative == star


def test_relators_span_weighted_form():
    for decos, loops in [((S1, S2, S3, S4), 0), ((S1, S2, S3, S4, A1), 0), ((S1, S1, S2, S2), 0), ((S1, S2, S3), 1)]:
        ctx = get_context(decos, loops)
        for p in ctx.parents():
            r = weighted_relator(p, ctx.basis)
            assert not ctx.reduce_coords({ctx.index[k]: c for k, c in r.items()})


def test_inner_product_with_dual_is_aut():
    for g in enumerate_graphs(alphabet(2, 1), 1, 6):
        dk, sign = dual_key(g.key)
        pair = inner_product(GraphVector.from_canonical(g), GraphVector.from_canonical(dk) * sign)
        assert pair == g.aut


def test_inner_product_star():
    star = vec([0, S1, S2, S3], [(0, 1), (0, 2), (0, 3)])
    assert inner_product(star, star) == 1
    other = vec([0, S1, S2, A1], [(0, 1), (0, 2), (0, 3)])
    assert inner_product(star, other) == 0


def test_dual_delta_examples():
    star = vec([0, S1, S2, S3], [(0, 1), (0, 2), (0, 3)])
    assert dual_delta(star).is_zero()
    # two s1 legs are glued through a new vertex into a one-loop graph
    tree = vec([0, 0, S1, S1, S2, S3], [(0, 1), (0, 2), (0, 4), (1, 3), (1, 5)])
    out = delta_vector(tree)
    assert out and all(len(m) == 1 for m in out.terms)
    for (k,) in out.terms:
        assert sorted(c for c in k[0] if c) == [S1, S2, S3]
    # a form pair is glued into an edge
    pair = vec([0, 0, 0, S1, A1, S2, B1, S3], [(0, 1), (1, 2), (0, 3), (0, 4), (1, 5), (2, 6), (2, 7)])
    glued = delta_vector(pair)
    assert glued and all(sorted(c for c in k[0] if c) == [S1, S2, S3] for (k,) in glued.terms)


def test_dual_bracket_examples():
    e12, e23 = vec([S1, S2], [(0, 1)]), vec([S2, S3], [(0, 1)])
    star = vec([0, S1, S2, S3], [(0, 1), (0, 2), (0, 3)])
    out = bracket_vector(e12, e23)
    assert set(out.terms) == set(star.terms)
    e13 = vec([S1, S3], [(0, 1)])
    assert bracket_vector(e12, e13) != 0
    assert dual_bracket(vec([S1, S2], [(0, 1)]), vec([S3, S4], [(0, 1)])).is_zero()


def test_bracket_symmetry():
    graphs = [GraphVector.from_canonical(g) for g in enumerate_graphs([S1, S2, A1, B1], 1, 6)]
    graphs += [GraphVector.from_canonical(g) for g in enumerate_graphs([S1, S2, S3], 1, 6)]
    graphs += [GraphVector.from_canonical(g) for g in enumerate_graphs([S1, B1], 1, 4)]
    seen = set()
    for a, b in itertools.product(graphs, repeat=2):
        ea = len(next(iter(a.terms))[0][1])
        eb = len(next(iter(b.terms))[0][1])
        ab, ba = bracket_vector(a, b), bracket_vector(b, a)
        assert ab == ba * (-1) ** (ea * eb)
        if ab:
            seen.add((ea % 2, eb % 2))
    assert seen == {(0, 0), (0, 1), (1, 0), (1, 1)}


def adjointness_sets(genus):
    keys = []
    for n in range(1, 6):
        for ms in itertools.combinations_with_replacement(alphabet(2, genus), n):
            keys += [g.key for g in enumerate_graphs(list(ms), 1, 6)]
    return keys


def test_cut_is_adjoint_to_self_gluing():
    keys = adjointness_sets(1)
    one_loop = [k for k in keys if len(k[1]) - len(k[0]) + 1 == 1]
    trees = [k for k in keys if len(k[1]) - len(k[0]) + 1 == 0]
    checked = 0
    for x in one_loop:
        cut = cut_parts(x, 1, 1)
        for y in trees:
            lhs = inner_product(cut, GraphVector.from_canonical(y))
            rhs = inner_product(GraphVector.from_canonical(x), delta_vector(GraphVector.from_canonical(y)))
            assert lhs == rhs
            checked += bool(lhs)
    assert checked > 10


def test_cut_is_adjoint_to_bracket():
    keys = adjointness_sets(1)
    small = [k for k in keys if len(k[1]) <= 3]
    checked = 0
    for x in keys:
        cut = cut_parts(x, 1, 2)
        if not cut:
            continue
        for y, z in itertools.product(small, repeat=2):
            if len(y[1]) + len(z[1]) != len(x[1]) + 1:
                continue
            yz = GraphVector.from_canonical(y, z)
            if not yz:
                continue
            lhs = inner_product(cut, yz)
            rhs = inner_product(
                GraphVector.from_canonical(x), bracket_vector(GraphVector.from_canonical(y), GraphVector.from_canonical(z))
            )
            assert lhs == rhs
            checked += bool(lhs)
    assert checked > 10


def test_signs_table_is_fixed():
    assert set(SIGNS.values()) <= {1, -1} and len(SIGNS) == 4


def test_ihx_class_arithmetic():
    ctx = get_context((S1, S2, S3, S4), 0)
    a, b = (GraphVector.from_canonical(k) for k in ctx.basis[:2])
    ca, cb = ihx_reduce(a, ctx), ihx_reduce(b, ctx)
    assert (ca + cb) - cb == ca
    assert isinstance(ca, IhxClass)
    assert ihx_reduce(a * Fraction(2), ((S1, S2, S3, S4), 0)) == ca + ca

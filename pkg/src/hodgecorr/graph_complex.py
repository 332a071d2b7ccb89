"""Exact linear combinations of oriented graphs, the wedge product and the differentials.

A *monomial* is a sorted tuple of canonical component keys; the empty tuple
is the unit.  Components are ordered by key and the sign of the reordering
follows the Koszul rule with edge-count parity, so a repeated odd component
makes the monomial vanish.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from hodgecorr.graph_core import (
    CanonicalGraph,
    Key,
    Label,
    OrientedGraph,
    canon_component,
    components,
    graph_from_json,
    graph_to_json,
    is_s_code,
    permutation_sign,
    zero_pattern,
)

Monomial = tuple[Key, ...]
Edges = Sequence[tuple[int, int]]

UNIT: Monomial = ()


def n_edges(mono: Monomial) -> int:
    return sum(len(k[1]) for k in mono)


def degree(mono: Monomial) -> int:
    """Sum over components of ``|E| - 2|V_int|``."""
    return sum(len(k[1]) - 2 * k[0].count(0) for k in mono)


def _sort_components(parts: list[tuple[Key, int]]) -> tuple[Monomial, int] | None:
    """Insertion-sort ``(key, edge_count)`` pairs tracking the Koszul sign."""
    parts = list(parts)
    sign = 1
    for i in range(1, len(parts)):
        j = i
        while j > 0 and parts[j - 1][0] > parts[j][0]:
            if parts[j - 1][1] & parts[j][1] & 1:
                sign = -sign
            parts[j - 1], parts[j] = parts[j], parts[j - 1]
            j -= 1
    for a, b in zip(parts, parts[1:]):
        if a[0] == b[0] and a[1] & 1:
            return None
    return tuple(p[0] for p in parts), sign


def canonical_monomial(labels: Sequence[int], edges: Edges) -> tuple[Monomial, int] | None:
    """Normalize a possibly disconnected oriented graph; ``None`` when it is zero."""
    comps = components(len(labels), edges)
    where = {}
    for ci, comp in enumerate(comps):
        for i, v in enumerate(comp):
            where[v] = (ci, i)
    grouped: list[list[int]] = [[] for _ in comps]
    for pos, (a, _) in enumerate(edges):
        grouped[where[a][0]].append(pos)
    sign = permutation_sign([p for g in grouped for p in g])
    parts = []
    for ci, comp in enumerate(comps):
        sub_labels = [labels[v] for v in comp]
        sub_edges = [(where[edges[p][0]][1], where[edges[p][1]][1]) for p in grouped[ci]]
        if zero_pattern(sub_labels, sub_edges) is not None:
            return None
        c = canon_component(sub_labels, sub_edges)
        if c.odd:
            return None
        sign *= c.sign
        parts.append((c.key, len(sub_edges)))
    res = _sort_components(parts)
    if res is None:
        return None
    return res[0], sign * res[1]


def wedge_monomials(a: Monomial, b: Monomial) -> tuple[Monomial, int] | None:
    res = _sort_components([(k, len(k[1])) for k in a] + [(k, len(k[1])) for k in b])
    return res


class GraphVector:
    """Finite rational combination of monomials.  Zero coefficients are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction | int] | None = None) -> None:
        self.terms: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[m] = Fraction(c)

    @classmethod
    def from_graph(cls, labels: Sequence[int], edges: Edges, coeff: Fraction | int = 1) -> "GraphVector":
        """Vector of a single oriented graph given in vertex form (zero graphs give 0)."""
        v = cls()
        v.add_graph(labels, edges, coeff)
        return v

    @classmethod
    def from_canonical(cls, *graphs: CanonicalGraph | Key, coeff: Fraction | int = 1) -> "GraphVector":
        keys = [g.key if isinstance(g, CanonicalGraph) else g for g in graphs]
        res = _sort_components([(k, len(k[1])) for k in keys])
        if res is None:
            return cls()
        return cls({res[0]: res[1] * Fraction(coeff)})

    @classmethod
    def from_oriented(cls, g: OrientedGraph, coeff: Fraction | int = 1) -> "GraphVector":
        return cls.from_graph(*g.vertex_form(), coeff)

    @classmethod
    def unit(cls) -> "GraphVector":
        return cls({UNIT: 1})

    def add_graph(self, labels: Sequence[int], edges: Edges, coeff: Fraction | int = 1) -> None:
        res = canonical_monomial(labels, edges)
        if res is not None:
            self.add(res[0], res[1] * coeff)

    def add(self, mono: Monomial, coeff: Fraction | int) -> None:
        c = self.terms.get(mono, 0) + coeff
        if c:
            self.terms[mono] = Fraction(c)
        else:
            self.terms.pop(mono, None)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __getitem__(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        return isinstance(other, GraphVector) and self.terms == other.terms

    def __add__(self, other: "GraphVector") -> "GraphVector":
        out = GraphVector(self.terms)
        for m, c in other.terms.items():
            out.add(m, c)
        return out

    def __neg__(self) -> "GraphVector":
        return GraphVector({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "GraphVector") -> "GraphVector":
        return self + (-other)

    def __mul__(self, scalar: Fraction | int) -> "GraphVector":
        return GraphVector({m: c * scalar for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __repr__(self) -> str:
        if not self.terms:
            return "GraphVector(0)"
        parts = []
        for m, c in self:
            name = " ^ ".join(str(CanonicalGraph(k)) for k in m) or "1"
            parts.append(f"{c}*{name}")
        return "GraphVector(" + " + ".join(parts) + ")"

    def degrees(self) -> set[int]:
        return {degree(m) for m in self.terms}

    def homogeneous_degree(self) -> int | None:
        """Common degree of all terms, ``None`` for the zero vector or mixed degrees."""
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def to_json(self) -> list[dict]:
        out = []
        for m, c in self:
            out.append(
                {
                    "monomial": [graph_to_json(CanonicalGraph(k)) for k in m],
                    "coeff": f"{c.numerator}/{c.denominator}",
                }
            )
        return out

    @classmethod
    def from_json(cls, data: list[dict] | str) -> "GraphVector":
        if isinstance(data, str):
            data = json.loads(data)
        out = cls()
        for item in data:
            labels: list[int] = []
            edges: list[tuple[int, int]] = []
            for comp in item["monomial"]:
                lab, ed = graph_from_json(comp).vertex_form()
                off = len(labels)
                labels += lab
                edges += [(a + off, b + off) for a, b in ed]
            out.add_graph(labels, edges, Fraction(item["coeff"]))
        return out


def wedge(a: GraphVector, b: GraphVector) -> GraphVector:
    """Graded-commutative product: disjoint union with Koszul signs on edge parity."""
    out = GraphVector()
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            res = wedge_monomials(ma, mb)
            if res is not None:
                out.add(res[0], res[1] * ca * cb)
    return out


# ---------------------------------------------------------------------------
# Differentials on connected components.  Each returns a list of
# (labels, edges, coeff) with the sign of moving the acted-on edge to the
# front already folded into coeff.

Term = tuple[list[int], list[tuple[int, int]], int]


def contract_terms(labels: Sequence[int], edges: Edges) -> list[Term]:
    """Contract each internal edge with distinct internal endpoints."""
    out = []
    for p, (a, b) in enumerate(edges):
        if a == b or labels[a] or labels[b]:
            continue
        keep = [v for v in range(len(labels)) if v != b]
        idx = {v: i for i, v in enumerate(keep)}
        idx[b] = idx[a]
        rest = [(idx[x], idx[y]) for q, (x, y) in enumerate(edges) if q != p]
        out.append(([labels[v] for v in keep], rest, -1 if p & 1 else 1))
    return out


def casimir_pairs(genus: int) -> list[tuple[int, int, int]]:
    """``(code at a, code at b, weight)`` for the identity element over the basis forms."""
    out = []
    for i in range(1, genus + 1):
        hol, anti = Label("hol", i).code, Label("antihol", i).code
        out.append((hol, anti, 1))
        out.append((anti, hol, -1))
    return out


def cut_terms(labels: Sequence[int], edges: Edges, genus: int) -> list[Term]:
    """Cut each edge and cap the two ends with a Casimir pair of basis forms.

    The new edge order is ``[a-side, b-side] + rest``.
    """
    out = []
    n = len(labels)
    for p, (a, b) in enumerate(edges):
        rest = [e for q, e in enumerate(edges) if q != p]
        sgn = -1 if p & 1 else 1
        for ca, cb, w in casimir_pairs(genus):
            new_labels = list(labels) + [ca, cb]
            out.append((new_labels, [(a, n), (n + 1, b)] + rest, sgn * w))
    return out


def leg_terms(labels: Sequence[int], edges: Edges) -> list[Term]:
    """Remove an S-leg with its internal endpoint; the freed edges get new legs with the same label."""
    out = []
    for p, (a, b) in enumerate(edges):
        if is_s_code(labels[a]) and labels[b] == 0:
            x, v = a, b
        elif is_s_code(labels[b]) and labels[a] == 0:
            x, v = b, a
        else:
            continue
        s = labels[x]
        keep = [u for u in range(len(labels)) if u not in (x, v)]
        idx = {u: i for i, u in enumerate(keep)}
        new_labels = [labels[u] for u in keep]
        rest = []
        for q, (c, d) in enumerate(edges):
            if q == p:
                continue
            if c == v:
                new_labels.append(s)
                c_new, d_new = len(new_labels) - 1, idx[d]
            elif d == v:
                new_labels.append(s)
                c_new, d_new = idx[c], len(new_labels) - 1
            else:
                c_new, d_new = idx[c], idx[d]
            rest.append((c_new, d_new))
        out.append((new_labels, rest, -1 if p & 1 else 1))
    return out


@lru_cache(maxsize=None)
def _component_image(key: Key, which: str, genus: int) -> tuple[tuple[Monomial, Fraction], ...]:
    labels, edges = key
    if which == "delta":
        terms = contract_terms(labels, edges)
    elif which == "cas":
        terms = cut_terms(labels, edges, genus)
    elif which == "s":
        terms = leg_terms(labels, edges)
    else:
        raise ValueError(which)
    acc = GraphVector()
    for lab, ed, c in terms:
        acc.add_graph(lab, ed, c)
    return tuple(sorted(acc.terms.items()))


def _apply(v: GraphVector, ops: Sequence[tuple[str, int]]) -> GraphVector:
    out = GraphVector()
    for mono, coeff in v.terms.items():
        before = 0
        for i, key in enumerate(mono):
            sgn = -1 if before & 1 else 1
            left, right = mono[:i], mono[i + 1 :]
            for which, genus in ops:
                for image, c in _component_image(key, which, genus):
                    res = _sort_components([(k, len(k[1])) for k in left + image + right])
                    if res is not None:
                        out.add(res[0], res[1] * sgn * c * coeff)
            before += len(key[1])
    return out


def d_delta(v: GraphVector) -> GraphVector:
    """Edge-contraction differential, extended to monomials by the graded Leibniz rule."""
    return _apply(v, [("delta", 0)])


def d_cas(v: GraphVector, genus: int) -> GraphVector:
    """Edge-cutting differential with Casimir decoration over ``genus`` basis pairs."""
    if genus <= 0:
        return GraphVector()
    return _apply(v, [("cas", genus)])


def d_s(v: GraphVector) -> GraphVector:
    """S-leg removal differential."""
    return _apply(v, [("s", 0)])


def d_total(v: GraphVector, genus: int) -> GraphVector:
    """Sum of the three differentials."""
    ops = [("delta", 0), ("s", 0)]
    if genus > 0:
        ops.append(("cas", genus))
    return _apply(v, ops)


def apply_linear(v: GraphVector, f: Callable[[Monomial], GraphVector]) -> GraphVector:
    """Extend a map on monomials linearly."""
    out = GraphVector()
    for m, c in v.terms.items():
        for m2, c2 in f(m).terms.items():
            out.add(m2, c * c2)
    return out


def basis_vectors(graphs: Iterable[CanonicalGraph]) -> Iterator[GraphVector]:
    for g in graphs:
        yield GraphVector.from_canonical(g)

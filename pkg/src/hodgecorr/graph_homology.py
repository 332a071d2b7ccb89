"""IHX quotient of uni-trivalent graphs, the graph pairing and the dual gluing operations.

Dual operations glue legs instead of cutting edges.  Their orientation rule
is "new edge in front":

* Casimir gluing of legs on edges ``e1, e2``: ``e1 ^ e2 ^ rest`` becomes ``E ^ rest``.
* S-gluing of two equal S-legs through a new vertex: ``Or`` becomes ``E_new ^ Or``.

The overall sign of each operation is the constant in :data:`SIGNS`, fixed so
that gluing is exactly adjoint to cutting under :func:`pair_monomials`.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from hodgecorr.graph_complex import (
    GraphVector,
    Monomial,
    _sort_components,
    canonical_monomial,
    contract_terms,
    cut_terms,
    leg_terms,
)
from hodgecorr.graph_core import (
    CanonicalGraph,
    GraphError,
    Key,
    Label,
    canon_component,
    components,
    dual_code,
    enumerate_graphs,
    is_form_code,
    is_s_code,
    loop_number,
    permutation_sign,
)

#: Global signs making gluing adjoint to cutting.
SIGNS = {"delta_cas": -1, "delta_s": 1, "bracket_cas": -1, "bracket_s": 1}


# ---------------------------------------------------------------------------
# Pairing


def dual_key(key: Key) -> tuple[Key, int]:
    """Canonical key of the decoration-dual graph and the orientation sign."""
    labels, edges = key
    c = canon_component([dual_code(x) for x in labels], edges)
    return c.key, c.sign


def dual_monomial(mono: Monomial) -> tuple[Monomial, int] | None:
    sign = 1
    parts = []
    for k in mono:
        dk, s = dual_key(k)
        sign *= s
        parts.append((dk, len(k[1])))
    res = _sort_components(parts)
    if res is None:
        return None
    return res[0], sign * res[1]


def monomial_aut(mono: Monomial) -> int:
    """Automorphisms of the disjoint union, including permutations of equal components."""
    total = 1
    for k in mono:
        total *= canon_component(*k).aut
    for m in Counter(mono).values():
        total *= math.factorial(m)
    return total


def pair_monomials(a: Monomial, b: Monomial) -> int:
    """``±|Aut(a)|`` when ``b`` is the decoration dual of ``a``, else 0."""
    d = dual_monomial(a)
    if d is None or d[0] != b:
        return 0
    return d[1] * monomial_aut(a)


def inner_product(a: CanonicalGraph | GraphVector, b: CanonicalGraph | GraphVector) -> Fraction:
    """Bilinear pairing ``<G1, G2> = |Aut(G1)|`` if ``G2`` is the dual of ``G1`` (with orientation sign)."""
    va = a if isinstance(a, GraphVector) else GraphVector.from_canonical(a)
    vb = b if isinstance(b, GraphVector) else GraphVector.from_canonical(b)
    total = Fraction(0)
    for ma, ca in va.terms.items():
        d = dual_monomial(ma)
        if d is None:
            continue
        cb = vb.terms.get(d[0])
        if cb:
            total += ca * cb * d[1] * monomial_aut(ma)
    return total


# ---------------------------------------------------------------------------
# Gluing surgery

Term = tuple[list[int], list[tuple[int, int]], int]


def form_pairing(c1: int, c2: int) -> int:
    """Symplectic pairing of basis forms: ``<hol_i, antihol_i> = 1 = -<antihol_i, hol_i>``."""
    if not (is_form_code(c1) and is_form_code(c2)):
        return 0
    if (c1 - 1) // 3 != (c2 - 1) // 3:
        return 0
    k1, k2 = (c1 - 1) % 3, (c2 - 1) % 3
    if (k1, k2) == (1, 2):
        return 1
    if (k1, k2) == (2, 1):
        return -1
    return 0


def _leg_edge(edges: Sequence[tuple[int, int]], x: int) -> tuple[int, int]:
    for i, (a, b) in enumerate(edges):
        if a == x:
            return i, b
        if b == x:
            return i, a
    raise GraphError(f"vertex {x} has no edge")


def glue_cas(labels: Sequence[int], edges: Sequence[tuple[int, int]], x1: int, x2: int) -> Term | None:
    """Fuse the legs at external vertices ``x1, x2`` into one edge placed first in the order."""
    e1, v1 = _leg_edge(edges, x1)
    e2, v2 = _leg_edge(edges, x2)
    if e1 == e2:
        return None
    rest_idx = [q for q in range(len(edges)) if q not in (e1, e2)]
    sign = permutation_sign([e1, e2] + rest_idx)
    keep = [v for v in range(len(labels)) if v not in (x1, x2)]
    idx = {v: i for i, v in enumerate(keep)}
    new_edges = [(idx[v1], idx[v2])] + [(idx[edges[q][0]], idx[edges[q][1]]) for q in rest_idx]
    return [labels[v] for v in keep], new_edges, sign


def glue_s(labels: Sequence[int], edges: Sequence[tuple[int, int]], x1: int, x2: int) -> Term:
    """Join two S-legs at a new trivalent vertex carrying a fresh leg with the same label."""
    s = labels[x1]
    keep = [v for v in range(len(labels)) if v not in (x1, x2)]
    idx = {v: i for i, v in enumerate(keep)}
    u = len(keep)
    idx[x1] = idx[x2] = u
    new_labels = [labels[v] for v in keep] + [0, s]
    new_edges = [(u, u + 1)] + [(idx[a], idx[b]) for a, b in edges]
    return new_labels, new_edges, 1


def _externals(labels: Sequence[int]) -> list[int]:
    return [v for v, c in enumerate(labels) if c]


def delta_terms(labels: Sequence[int], edges: Sequence[tuple[int, int]]) -> list[Term]:
    """All self-gluings of a connected graph with their weights and orientation signs."""
    out: list[Term] = []
    ext = _externals(labels)
    for i, x1 in enumerate(ext):
        for x2 in ext[i + 1 :]:
            w = form_pairing(labels[x1], labels[x2])
            if w:
                t = glue_cas(labels, edges, x1, x2)
                if t is not None:
                    out.append((t[0], t[1], t[2] * w * SIGNS["delta_cas"]))
            elif is_s_code(labels[x1]) and labels[x1] == labels[x2]:
                t = glue_s(labels, edges, x1, x2)
                out.append((t[0], t[1], t[2] * SIGNS["delta_s"]))
    return out


def bracket_terms(ky: Key, kz: Key) -> list[Term]:
    """Gluings of one leg of ``ky`` to one leg of ``kz``; orientation ``Or_y ^ Or_z`` before surgery."""
    ly, ey = ky
    lz, ez = kz
    off = len(ly)
    labels = list(ly) + list(lz)
    edges = list(ey) + [(a + off, b + off) for a, b in ez]
    out: list[Term] = []
    for x1 in _externals(ly):
        for x2 in _externals(lz):
            x2 += off
            w = form_pairing(labels[x1], labels[x2])
            if w:
                t = glue_cas(labels, edges, x1, x2)
                if t is not None:
                    out.append((t[0], t[1], t[2] * w * SIGNS["bracket_cas"]))
            elif is_s_code(labels[x1]) and labels[x1] == labels[x2]:
                t = glue_s(labels, edges, x1, x2)
                out.append((t[0], t[1], t[2] * SIGNS["bracket_s"]))
    return out


@lru_cache(maxsize=None)
def _delta_image(key: Key) -> tuple[tuple[Monomial, Fraction], ...]:
    acc = GraphVector()
    for lab, ed, c in delta_terms(*key):
        acc.add_graph(lab, ed, c)
    return tuple(sorted(acc.terms.items()))


@lru_cache(maxsize=None)
def _bracket_image(ky: Key, kz: Key) -> tuple[tuple[Monomial, Fraction], ...]:
    acc = GraphVector()
    for lab, ed, c in bracket_terms(ky, kz):
        acc.add_graph(lab, ed, c)
    return tuple(sorted(acc.terms.items()))


def _connected_only(v: GraphVector, what: str) -> None:
    for m in v.terms:
        if len(m) != 1:
            raise GraphError(f"{what} acts on connected graphs; got a {len(m)}-component monomial")


def delta_vector(v: GraphVector) -> GraphVector:
    """Unreduced self-gluing operator on a combination of connected graphs."""
    _connected_only(v, "delta")
    out = GraphVector()
    for (k,), c in v.terms.items():
        for m, c2 in _delta_image(k):
            out.add(m, c * c2)
    return out


def bracket_vector(a: GraphVector, b: GraphVector) -> GraphVector:
    """Unreduced bilinear gluing bracket on combinations of connected graphs."""
    _connected_only(a, "bracket")
    _connected_only(b, "bracket")
    out = GraphVector()
    for (ka,), ca in a.terms.items():
        for (kb,), cb in b.terms.items():
            for m, c2 in _bracket_image(ka, kb):
                out.add(m, ca * cb * c2)
    return out


# ---------------------------------------------------------------------------
# Cut operators split by the number of resulting components


@lru_cache(maxsize=None)
def cut_image(key: Key, genus: int) -> tuple[tuple[Monomial, Fraction], ...]:
    """Edge cuts and S-leg removals of a connected graph (no contractions)."""
    labels, edges = key
    acc = GraphVector()
    for lab, ed, c in leg_terms(labels, edges) + cut_terms(labels, edges, genus):
        acc.add_graph(lab, ed, c)
    return tuple(sorted(acc.terms.items()))


def cut_parts(key: Key, genus: int, n_components: int) -> GraphVector:
    return GraphVector({m: c for m, c in cut_image(key, genus) if len(m) == n_components})


# ---------------------------------------------------------------------------
# IHX quotient


@dataclass(frozen=True)
class IhxContextKey:
    decorations: tuple[int, ...]
    loops: int

    @property
    def n_edges(self) -> int:
        return 2 * len(self.decorations) + 3 * self.loops - 3


def context_of(key: Key) -> IhxContextKey:
    labels, edges = key
    return IhxContextKey(tuple(sorted(c for c in labels if c)), loop_number(labels, edges))


def resolutions(key: Key) -> list[Term]:
    """The three splittings of the unique 4-valent vertex, new edge first in the order."""
    labels, edges = key
    deg = Counter()
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    big = [v for v in range(len(labels)) if labels[v] == 0 and deg[v] == 4]
    if len(big) != 1 or any(labels[v] == 0 and deg[v] != 3 for v in range(len(labels)) if v not in big):
        raise GraphError("resolutions need exactly one 4-valent vertex and trivalent elsewhere")
    v = big[0]
    inc = [q for q, (a, b) in enumerate(edges) if v in (a, b)]
    w = len(labels)
    out = []
    for pair in ((inc[2], inc[3]), (inc[1], inc[3]), (inc[1], inc[2])):
        new_edges = [(v, w)]
        for q, (a, b) in enumerate(edges):
            if q in pair:
                a, b = (w, b) if a == v else (a, w)
            new_edges.append((a, b))
        out.append((list(labels) + [0], new_edges, 1))
    return out


class IhxContext:
    """Uni-trivalent basis of one ``(decorations, loops)`` sector with its IHX relations in echelon form."""

    def __init__(self, ctx: IhxContextKey) -> None:
        self.key = ctx
        graphs = [
            g
            for g in enumerate_graphs(list(ctx.decorations), ctx.loops, max(ctx.n_edges, 1))
            if loop_number(*g.key) == ctx.loops
        ]
        self.basis: list[Key] = [g.key for g in graphs]
        self.index = {k: i for i, k in enumerate(self.basis)}
        self.relators = self._relators()
        self.rows = self._echelon([dict(r) for r in self.relators])
        self.pivots = {p: row for p, row in self.rows}

    def parents(self) -> list[Key]:
        """Nonzero defect-1 graphs obtained by contracting one internal edge of a basis graph."""
        seen = set()
        for k in self.basis:
            for lab, ed, _ in contract_terms(*k):
                res = canonical_monomial(lab, ed)
                if res is not None:
                    seen.add(res[0][0])
        return sorted(seen)

    def _relators(self) -> list[dict[int, Fraction]]:
        out = []
        for p in self.parents():
            row: dict[int, Fraction] = {}
            for lab, ed, c in resolutions(p):
                res = canonical_monomial(lab, ed)
                if res is None:
                    continue
                i = self.index[res[0][0]]
                row[i] = row.get(i, 0) + c * res[1]
            row = {i: Fraction(c) for i, c in row.items() if c}
            if row:
                out.append(row)
        return out

    @staticmethod
    def _echelon(rows: list[dict[int, Fraction]]) -> list[tuple[int, dict[int, Fraction]]]:
        """Reduced row echelon form; pivot is the smallest basis index in each row."""
        done: list[tuple[int, dict[int, Fraction]]] = []
        for row in rows:
            for p, prow in done:
                c = row.get(p)
                if c:
                    for j, x in prow.items():
                        y = row.get(j, 0) - c * x
                        if y:
                            row[j] = y
                        else:
                            row.pop(j, None)
            if not row:
                continue
            p = min(row)
            inv = 1 / row[p]
            row = {j: x * inv for j, x in row.items()}
            new_done = []
            for q, qrow in done:
                c = qrow.get(p)
                if c:
                    for j, x in row.items():
                        y = qrow.get(j, 0) - c * x
                        if y:
                            qrow[j] = y
                        else:
                            qrow.pop(j, None)
                new_done.append((q, qrow))
            done = new_done + [(p, row)]
        return sorted(done)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def dimension(self) -> int:
        """Dimension of the quotient."""
        return len(self.basis) - self.rank

    def reduce_coords(self, coords: dict[int, Fraction]) -> dict[int, Fraction]:
        out = {i: Fraction(c) for i, c in coords.items() if c}
        for p in sorted(set(out) & set(self.pivots)):
            c = out.get(p)
            if not c:
                continue
            for j, x in self.pivots[p].items():
                y = out.get(j, 0) - c * x
                if y:
                    out[j] = y
                else:
                    out.pop(j, None)
        return out

    def coords(self, v: GraphVector) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for m, c in v.terms.items():
            if len(m) != 1 or m[0] not in self.index:
                raise GraphError(f"term {[str(CanonicalGraph(k)) for k in m]} is outside the IHX context {self.key}")
            out[self.index[m[0]]] = out.get(self.index[m[0]], 0) + c
        return out

    def to_vector(self, coords: dict[int, Fraction]) -> GraphVector:
        return GraphVector({(self.basis[i],): c for i, c in coords.items()})

    def relation_csv(self) -> str:
        """Sparse relator matrix as CSV rows ``relator,column,graph,coeff``."""
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["relator", "column", "graph", "coeff"])
        for r, row in enumerate(self.relators):
            for j in sorted(row):
                c = row[j]
                w.writerow([r, j, str(CanonicalGraph(self.basis[j])), f"{c.numerator}/{c.denominator}"])
        return buf.getvalue()


@lru_cache(maxsize=None)
def get_context(decorations: tuple[int, ...], loops: int) -> IhxContext:
    return IhxContext(IhxContextKey(tuple(sorted(decorations)), loops))


def _as_context(context: IhxContext | IhxContextKey | tuple) -> IhxContext:
    if isinstance(context, IhxContext):
        return context
    if isinstance(context, IhxContextKey):
        return get_context(context.decorations, context.loops)
    decos, loops = context
    codes = tuple(sorted(d.code if isinstance(d, Label) else int(d) for d in decos))
    return get_context(codes, loops)


class IhxClass:
    """Class of a uni-trivalent combination modulo IHX, stored as its normal form."""

    __slots__ = ("parts",)

    def __init__(self, parts: dict[IhxContextKey, dict[int, Fraction]] | None = None) -> None:
        self.parts = {k: v for k, v in (parts or {}).items() if v}

    @property
    def representative(self) -> GraphVector:
        out = GraphVector()
        for ck, coords in self.parts.items():
            out = out + get_context(ck.decorations, ck.loops).to_vector(coords)
        return out

    @property
    def contexts(self) -> list[IhxContextKey]:
        return sorted(self.parts, key=lambda c: (c.decorations, c.loops))

    def is_zero(self) -> bool:
        return not self.parts

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IhxClass) and self.parts == other.parts

    def __add__(self, other: "IhxClass") -> "IhxClass":
        return reduce_vector(self.representative + other.representative)

    def __sub__(self, other: "IhxClass") -> "IhxClass":
        return reduce_vector(self.representative - other.representative)

    def __repr__(self) -> str:
        return f"IhxClass({self.representative!r})"


def reduce_vector(v: GraphVector) -> IhxClass:
    """Reduce a combination of uni-trivalent connected graphs, sector by sector."""
    groups: dict[IhxContextKey, GraphVector] = {}
    for m, c in v.terms.items():
        if len(m) != 1:
            raise GraphError("IHX reduction needs connected graphs")
        groups.setdefault(context_of(m[0]), GraphVector()).add(m, c)
    parts = {}
    for ck, vec in groups.items():
        ctx = get_context(ck.decorations, ck.loops)
        parts[ck] = ctx.reduce_coords(ctx.coords(vec))
    return IhxClass(parts)


def ihx_reduce(v: GraphVector, context: IhxContext | IhxContextKey | tuple) -> IhxClass:
    """Normal form of ``v`` modulo IHX inside one context; terms outside it raise :class:`GraphError`."""
    ctx = _as_context(context)
    return IhxClass({ctx.key: ctx.reduce_coords(ctx.coords(v))})


def dual_delta(g: IhxClass | GraphVector) -> IhxClass:
    """Self-gluing (Casimir pairs of forms plus equal S-legs), reduced mod IHX."""
    v = g.representative if isinstance(g, IhxClass) else g
    return reduce_vector(delta_vector(v))


def dual_bracket(a: IhxClass | GraphVector, b: IhxClass | GraphVector) -> IhxClass:
    """Gluing bracket of two connected combinations, reduced mod IHX."""
    va = a.representative if isinstance(a, IhxClass) else a
    vb = b.representative if isinstance(b, IhxClass) else b
    return reduce_vector(bracket_vector(va, vb))


def weighted_relator(parent: Key, basis: Iterable[Key]) -> dict[Key, Fraction]:
    """Independent form of the relator of ``parent``: sum of ``coeff_P(d_delta G) / |Aut G|`` times ``G``."""
    from hodgecorr.graph_complex import d_delta

    out = {}
    for k in basis:
        c = d_delta(GraphVector.from_canonical(k))[(parent,)]
        if c:
            out[k] = c / canon_component(*k).aut
    return out

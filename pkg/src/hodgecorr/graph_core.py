"""Decorated Feynman graphs: half-edge data, canonical forms, automorphisms, enumeration.

Two representations live side by side.  :class:`FeynmanGraph` is the
half-edge form (matching plus vertex blocks) used at the API boundary and in
JSON.  Internally a graph is a pair ``(labels, edges)``: ``labels[v]`` is 0 for
an internal vertex and a positive label code for an external one, and
``edges`` is an ordered tuple of vertex pairs.  The edge order *is* the
orientation: permuting it by ``sigma`` multiplies the graph by ``sign(sigma)``.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from hodgecorr._kernels import canonical_leaves

KINDS = ("s", "hol", "antihol")

#: Label codes above this value are scratch placeholders used during enumeration.
PLACEHOLDER = 1_000_000


class GraphError(ValueError):
    """Raised for structurally invalid graph data."""


@dataclass(frozen=True, order=True)
class Label:
    """Decoration of an external vertex: an S-point or a basis 1-form.

    >>> Label("hol", 1).dual()
    Label(kind='antihol', index=1)
    >>> Label.from_code(Label("s", 2).code)
    Label(kind='s', index=2)
    """

    kind: str
    index: int

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise GraphError(f"unknown label kind {self.kind!r}")
        if self.index < 1:
            raise GraphError(f"label index must be positive, got {self.index}")

    @property
    def code(self) -> int:
        return 3 * (self.index - 1) + KINDS.index(self.kind) + 1

    @classmethod
    def from_code(cls, code: int) -> "Label":
        return cls(KINDS[(code - 1) % 3], (code - 1) // 3 + 1)

    def dual(self) -> "Label":
        """Decoration-dual label: S-points are fixed, hol and antihol swap (no sign)."""
        if self.kind == "s":
            return self
        return Label("antihol" if self.kind == "hol" else "hol", self.index)

    def __str__(self) -> str:
        short = {"s": "s", "hol": "a", "antihol": "A"}[self.kind]
        return f"{short}{self.index}"

    def to_json(self) -> dict:
        return {"kind": self.kind, "index": self.index}


def dual_code(code: int) -> int:
    """Label code of the decoration-dual label."""
    if code == 0 or code > PLACEHOLDER:
        return code
    kind = (code - 1) % 3
    if kind == 0:
        return code
    return code + 1 if kind == 1 else code - 1


def is_s_code(code: int) -> bool:
    return 0 < code < PLACEHOLDER and (code - 1) % 3 == 0


def is_form_code(code: int) -> bool:
    return 0 < code < PLACEHOLDER and (code - 1) % 3 != 0


def alphabet(k: int, genus: int) -> list[int]:
    """Label codes of the S-points ``s1..sk`` and basis forms for the given genus."""
    codes = [Label("s", i).code for i in range(1, k + 1)]
    for i in range(1, genus + 1):
        codes += [Label("hol", i).code, Label("antihol", i).code]
    return sorted(codes)


# ---------------------------------------------------------------------------
# Half-edge representation


@dataclass(frozen=True)
class FeynmanGraph:
    """Half-edge data ``(h, P, W)``: a perfect matching and a vertex partition."""

    half_edges: int
    matching: tuple[tuple[int, int], ...]
    internal: tuple[tuple[int, ...], ...]
    external: tuple[tuple[int, Label], ...]

    @property
    def n_edges(self) -> int:
        return len(self.matching)

    @property
    def n_internal(self) -> int:
        return len(self.internal)

    @property
    def n_external(self) -> int:
        return len(self.external)

    def vertex_form(self) -> tuple[tuple[int, ...], tuple[tuple[int, int], ...]]:
        """Return ``(labels, edges)`` with edges in matching order."""
        owner: dict[int, int] = {}
        labels: list[int] = []
        for block in self.internal:
            for h in block:
                owner[h] = len(labels)
            labels.append(0)
        for h, lab in self.external:
            owner[h] = len(labels)
            labels.append(lab.code)
        edges = tuple((owner[a], owner[b]) for a, b in self.matching)
        return tuple(labels), edges

    @property
    def connected(self) -> bool:
        labels, edges = self.vertex_form()
        return len(components(len(labels), edges)) <= 1

    def loops(self) -> int:
        labels, edges = self.vertex_form()
        return len(edges) - len(labels) + len(components(len(labels), edges))


@dataclass(frozen=True)
class OrientedGraph:
    """A Feynman graph together with an ordering of its edges (indices into ``matching``)."""

    graph: FeynmanGraph
    edge_order: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.edge_order) != list(range(self.graph.n_edges)):
            raise GraphError(f"edge_order {self.edge_order} is not a permutation of the edges")

    def vertex_form(self) -> tuple[tuple[int, ...], tuple[tuple[int, int], ...]]:
        labels, edges = self.graph.vertex_form()
        return labels, tuple(edges[i] for i in self.edge_order)


def from_vertex_form(
    labels: Sequence[int], edges: Sequence[tuple[int, int]]
) -> OrientedGraph:
    """Build half-edge data from ``(labels, edges)``; half-edges ``2i, 2i+1`` form edge ``i``."""
    at: list[list[int]] = [[] for _ in labels]
    for i, (a, b) in enumerate(edges):
        at[a].append(2 * i)
        at[b].append(2 * i + 1)
    internal = tuple(tuple(at[v]) for v, c in enumerate(labels) if c == 0)
    external = tuple((at[v][0], Label.from_code(c)) for v, c in enumerate(labels) if c != 0)
    matching = tuple((2 * i, 2 * i + 1) for i in range(len(edges)))
    g = FeynmanGraph(2 * len(edges), matching, internal, external)
    return OrientedGraph(g, tuple(range(len(edges))))


def validate_graph(raw: Mapping | FeynmanGraph, *, trivalent: bool = True) -> FeynmanGraph:
    """Check half-edge data and return a :class:`FeynmanGraph`.

    ``raw`` follows the JSON schema (``half_edges``, ``matching``, ``internal``,
    ``external``).  Internal blocks must have exactly three half-edges unless
    ``trivalent`` is false, in which case any size of at least three is allowed.

    >>> g = validate_graph({"half_edges": 2, "matching": [[0, 1]], "internal": [],
    ...     "external": [{"h": 0, "label": {"kind": "s", "index": 1}},
    ...                  {"h": 1, "label": {"kind": "s", "index": 2}}]})
    >>> g.n_edges
    1
    """
    if isinstance(raw, FeynmanGraph):
        raw = graph_to_json(raw)
    try:
        n = int(raw["half_edges"])
        matching = [tuple(int(x) for x in pair) for pair in raw["matching"]]
        internal = [tuple(int(x) for x in block) for block in raw["internal"]]
        external = []
        for item in raw["external"]:
            lab = item["label"]
            external.append((int(item["h"]), Label(lab["kind"], int(lab["index"]))))
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph data: {exc!r}") from None

    seen: dict[int, int] = {}
    for i, pair in enumerate(matching):
        if len(pair) != 2:
            raise GraphError(f"matching entry {i} is not a pair: {pair}")
        a, b = pair
        if a == b:
            raise GraphError(f"matching fixed point at half-edge {a}")
        for h in pair:
            if not 0 <= h < n:
                raise GraphError(f"half-edge {h} out of range 0..{n - 1}")
            if h in seen:
                raise GraphError(f"half-edge {h} appears in matching entries {seen[h]} and {i}")
            seen[h] = i
    if len(seen) != n:
        missing = sorted(set(range(n)) - set(seen))
        raise GraphError(f"half-edges {missing} are not matched")

    owner: dict[int, str] = {}
    for i, block in enumerate(internal):
        if trivalent and len(block) != 3:
            raise GraphError(f"non-trivalent vertex: internal block {i} has {len(block)} half-edges {list(block)}")
        if len(block) < 3:
            raise GraphError(f"internal block {i} has valency {len(block)} < 3: {list(block)}")
        for h in block:
            if h in owner:
                raise GraphError(f"half-edge {h} in two blocks ({owner[h]} and internal {i})")
            owner[h] = f"internal {i}"
    for h, _ in external:
        if h in owner:
            raise GraphError(f"half-edge {h} in two blocks ({owner[h]} and external)")
        if not 0 <= h < n:
            raise GraphError(f"dangling decoration on half-edge {h}")
        owner[h] = "external"
    if len(owner) != n:
        missing = sorted(set(range(n)) - set(owner))
        raise GraphError(f"half-edges {missing} belong to no vertex")
    return FeynmanGraph(
        n,
        tuple(tuple(sorted(p)) for p in matching),
        tuple(tuple(sorted(b)) for b in internal),
        tuple(sorted(external)),
    )


# ---------------------------------------------------------------------------
# Vertex-form helpers


def components(n: int, edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    """Connected components as sorted vertex lists, ordered by smallest vertex."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return [groups[r] for r in sorted(groups)]


def zero_pattern(labels: Sequence[int], edges: Sequence[tuple[int, int]]) -> str | None:
    """Return the letter of the first zero relation (A)-(D) the connected graph hits, else ``None``."""
    pairs = set()
    for a, b in edges:
        if a == b:
            return "A"
    if len(labels) == 2 and len(edges) == 1 and labels[0] == labels[1] != 0:
        return "B"
    ext_nbrs: dict[int, list[int]] = {}
    for a, b in edges:
        if labels[a] == 0 and labels[b] != 0:
            ext_nbrs.setdefault(a, []).append(labels[b])
        elif labels[b] == 0 and labels[a] != 0:
            ext_nbrs.setdefault(b, []).append(labels[a])
    for nbrs in ext_nbrs.values():
        if len(nbrs) != len(set(nbrs)):
            return "C"
    for a, b in edges:
        key = (a, b) if a < b else (b, a)
        if key in pairs:
            return "D"
        pairs.add(key)
    return None


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation given as a sequence of distinct integers."""
    seen = [False] * len(seq)
    pos = {v: i for i, v in enumerate(sorted(seq))}
    sign = 1
    for i in range(len(seq)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = pos[seq[j]]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


Key = tuple[tuple[int, ...], tuple[tuple[int, int], ...]]


class Canon(NamedTuple):
    """Result of canonicalizing one connected component."""

    key: Key
    sign: int
    aut: int
    odd: bool


def _relabel_sign(edges: Sequence[tuple[int, int]], perm: Sequence[int]) -> tuple[tuple[tuple[int, int], ...], int]:
    rel = [(perm[a], perm[b]) if perm[a] <= perm[b] else (perm[b], perm[a]) for a, b in edges]
    order = sorted(range(len(rel)), key=lambda i: (rel[i], i))
    return tuple(rel[i] for i in order), permutation_sign(order)


def canon_component(labels: Sequence[int], edges: Sequence[tuple[int, int]]) -> Canon:
    """Canonicalize a connected ``(labels, edges)`` graph.

    ``sign`` is the parity taking the given edge order to the canonical one,
    ``aut`` is the number of half-edge automorphisms and ``odd`` flags an
    automorphism acting on edges by an odd permutation (the graph is then zero).
    """
    n = len(labels)
    code, leaves = canonical_leaves(n, list(labels), list(edges))
    new_labels = [0] * n
    for v, c in enumerate(labels):
        new_labels[leaves[0][v]] = c
    canon_edges, sign = _relabel_sign(edges, leaves[0])
    odd = False
    if len(leaves) > 1:
        for perm in leaves[1:]:
            if _relabel_sign(edges, perm)[1] != sign:
                odd = True
                break
    mult = Counter((a, b) if a <= b else (b, a) for a, b in edges)
    aut = len(leaves)
    for (a, b), m in mult.items():
        aut *= math.factorial(m)
        if a == b:
            aut *= 2**m
        if m > 1:
            odd = True
    return Canon((tuple(new_labels), canon_edges), sign, aut, odd)


# ---------------------------------------------------------------------------
# Canonical graphs


@dataclass(frozen=True, order=True)
class CanonicalGraph:
    """A connected graph in canonical vertex labeling with its canonical edge order."""

    key: Key
    aut: int = field(default=0, compare=False)

    @property
    def labels(self) -> tuple[int, ...]:
        return self.key[0]

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self.key[1]

    @property
    def n_edges(self) -> int:
        return len(self.key[1])

    @property
    def hash_key(self) -> str:
        return hashlib.sha1(repr(self.key).encode()).hexdigest()[:16]

    @property
    def graph(self) -> FeynmanGraph:
        return from_vertex_form(*self.key).graph

    @property
    def canonical_edge_order(self) -> tuple[int, ...]:
        return tuple(range(self.n_edges))

    def external_labels(self) -> list[Label]:
        return [Label.from_code(c) for c in self.labels if c]

    def __str__(self) -> str:
        legs = ",".join(str(Label.from_code(c)) for c in self.labels if c)
        return f"G[{legs}|{' '.join(f'{a}-{b}' for a, b in self.edges)}]"


def make_canonical(labels: Sequence[int], edges: Sequence[tuple[int, int]]) -> tuple[CanonicalGraph, int, bool]:
    """Canonicalize vertex-form data; returns ``(graph, sign, has_odd_automorphism)``."""
    c = canon_component(labels, edges)
    return CanonicalGraph(c.key, c.aut), c.sign, c.odd


def canonicalize(g: OrientedGraph | FeynmanGraph) -> tuple[CanonicalGraph, int]:
    """Canonical form of a connected oriented graph and the orientation sign.

    Isomorphic inputs give identical :class:`CanonicalGraph` values; the sign
    is the parity relating the input edge order to the canonical one.
    """
    if isinstance(g, FeynmanGraph):
        g = OrientedGraph(g, tuple(range(g.n_edges)))
    labels, edges = g.vertex_form()
    if len(components(len(labels), edges)) > 1:
        raise GraphError("canonicalize expects a connected graph; use graph_complex.monomial for wedges")
    cg, sign, _ = make_canonical(labels, edges)
    return cg, sign


def automorphism_count(g: CanonicalGraph | FeynmanGraph | OrientedGraph) -> int:
    """Number of half-edge permutations preserving the matching, the blocks and the decoration."""
    if isinstance(g, CanonicalGraph):
        if g.aut:
            return g.aut
        return canon_component(*g.key).aut
    if isinstance(g, FeynmanGraph):
        labels, edges = g.vertex_form()
    else:
        labels, edges = g.vertex_form()
    total = 1
    for comp in components(len(labels), edges):
        sub = set(comp)
        idx = {v: i for i, v in enumerate(comp)}
        total *= canon_component([labels[v] for v in comp], [(idx[a], idx[b]) for a, b in edges if a in sub]).aut
    # identical components may be permuted
    keys = Counter()
    for comp in components(len(labels), edges):
        sub = set(comp)
        idx = {v: i for i, v in enumerate(comp)}
        keys[canon_component([labels[v] for v in comp], [(idx[a], idx[b]) for a, b in edges if a in sub]).key] += 1
    for m in keys.values():
        total *= math.factorial(m)
    return total


def has_odd_automorphism(g: CanonicalGraph) -> bool:
    return canon_component(*g.key).odd


def is_zero_pattern(g: FeynmanGraph | CanonicalGraph) -> bool:
    """True iff the graph has a self-loop (A), is a 2-vertex graph with equal labels (B),
    has an internal vertex with two equal-labelled external neighbours (C), or a multi-edge (D)."""
    labels, edges = g.key if isinstance(g, CanonicalGraph) else g.vertex_form()
    return zero_pattern(labels, edges) is not None


def is_zero(labels: Sequence[int], edges: Sequence[tuple[int, int]]) -> bool:
    """Zero in the graph space: a zero pattern or an orientation-reversing automorphism."""
    return zero_pattern(labels, edges) is not None or canon_component(labels, edges).odd


# ---------------------------------------------------------------------------
# Statistics


class GraphStats(NamedTuple):
    defect: int
    order: int
    loops: int
    degree: int


def graph_stats(g: FeynmanGraph | CanonicalGraph) -> GraphStats:
    """``(defect, order, loops, degree)`` of a connected graph.

    >>> star = from_vertex_form((0, 1, 4, 7), ((0, 1), (0, 2), (0, 3))).graph
    >>> graph_stats(star)
    GraphStats(defect=0, order=-1, loops=0, degree=1)
    """
    labels, edges = g.key if isinstance(g, CanonicalGraph) else g.vertex_form()
    if len(components(len(labels), edges)) != 1:
        raise GraphError("graph_stats needs a connected graph; request per-component stats instead")
    n_int = sum(1 for c in labels if c == 0)
    n_ext = len(labels) - n_int
    e = len(edges)
    defect = 2 * e - 3 * n_int - n_ext
    order = e - len(labels)
    return GraphStats(defect, order, order + 1, e - 2 * n_int)


def loop_number(labels: Sequence[int], edges: Sequence[tuple[int, int]]) -> int:
    return len(edges) - len(labels) + len(components(len(labels), edges))


# ---------------------------------------------------------------------------
# Enumeration


def _trees(leaf_codes: Sequence[int]) -> Iterator[tuple[list[int], list[tuple[int, int]]]]:
    """All uni-trivalent trees with the given leaves in order of insertion (leaves distinct as positions)."""
    n = len(leaf_codes)
    if n < 2:
        return
    base_labels = [leaf_codes[0], leaf_codes[1]]
    base_edges = [(0, 1)]

    def grow(labels: list[int], edges: list[tuple[int, int]], k: int) -> Iterator:
        if k == n:
            yield labels, edges
            return
        for i, (a, b) in enumerate(edges):
            mid = len(labels)
            leaf = mid + 1
            new_edges = edges[:i] + [(a, mid), (mid, b)] + edges[i + 1 :] + [(mid, leaf)]
            yield from grow(labels + [0, leaf_codes[k]], new_edges, k + 1)

    yield from grow(base_labels, base_edges, 2)


def glue_leaves(
    labels: Sequence[int], edges: Sequence[tuple[int, int]], pairs: Sequence[tuple[int, int]]
) -> tuple[list[int], list[tuple[int, int]]]:
    """Glue pairs of external vertices: each pair's two legs become one edge between their neighbours."""
    nbr = {}
    for i, (a, b) in enumerate(edges):
        if labels[a] != 0:
            nbr[a] = (i, b)
        if labels[b] != 0:
            nbr[b] = (i, a)
    drop_v = set()
    drop_e = set()
    new = []
    for p, q in pairs:
        ip, vp = nbr[p]
        iq, vq = nbr[q]
        drop_v |= {p, q}
        drop_e |= {ip, iq}
        new.append((vp, vq))
    keep = [v for v in range(len(labels)) if v not in drop_v]
    idx = {v: i for i, v in enumerate(keep)}
    out_edges = [(idx[a], idx[b]) for i, (a, b) in enumerate(edges) if i not in drop_e]
    out_edges += [(idx[a], idx[b]) for a, b in new]
    return [labels[v] for v in keep], out_edges


def enumerate_graphs(
    decorations: Iterable[Label | int], loop_bound: int, edge_bound: int
) -> list[CanonicalGraph]:
    """One representative per class of connected uni-trivalent graphs with the given legs.

    Graphs equal to zero (relations (A)-(D) or an orientation-reversing
    automorphism) are excluded.  Output is sorted by canonical key.

    >>> s = [Label("s", i) for i in (1, 2, 3, 4)]
    >>> len(enumerate_graphs(s, 0, 10))
    3
    """
    codes = sorted(d.code if isinstance(d, Label) else int(d) for d in decorations)
    n = len(codes)
    found: dict[Key, CanonicalGraph] = {}
    for loops in range(loop_bound + 1):
        if 2 * n + 3 * loops - 3 > edge_bound or (n == 0 and loops < 2) or (loops == 0 and n < 2):
            continue
        holders = [PLACEHOLDER + j for j in range(2 * loops)]
        for labels, edges in _trees(codes + holders):
            if loops:
                pos = {c: v for v, c in enumerate(labels) if c >= PLACEHOLDER}
                pairs = [(pos[PLACEHOLDER + 2 * j], pos[PLACEHOLDER + 2 * j + 1]) for j in range(loops)]
                labels, edges = glue_leaves(labels, edges, pairs)
            if zero_pattern(labels, edges) is not None:
                continue
            c = canon_component(labels, edges)
            if c.odd or c.key in found:
                continue
            found[c.key] = CanonicalGraph(c.key, c.aut)
    return [found[k] for k in sorted(found)]


def connected_simple_graphs(m: int) -> list[tuple[tuple[int, int], ...]]:
    """Isomorphism classes of connected simple graphs on ``m`` unlabelled vertices."""
    if m == 0:
        return []
    if m == 1:
        return [()]
    pairs = list(itertools.combinations(range(m), 2))
    seen: dict[Key, tuple[tuple[int, int], ...]] = {}
    for r in range(m - 1, len(pairs) + 1):
        for subset in itertools.combinations(pairs, r):
            if len(components(m, subset)) != 1:
                continue
            key = canon_component([0] * m, subset).key
            seen.setdefault(key, key[1])
    return [seen[k] for k in sorted(seen)]


def enumerate_decorated_graphs(codes: Sequence[int], max_edges: int) -> list[CanonicalGraph]:
    """All nonzero connected decorated graphs (internal valency >= 3) with at most ``max_edges`` edges.

    Legs carry labels from ``codes``.  Graphs with multi-edges, self-loops,
    repeated labels at one vertex or odd automorphisms are zero and skipped.
    """
    codes = sorted(set(codes))
    found: dict[Key, CanonicalGraph] = {}

    def add(labels: list[int], edges: list[tuple[int, int]]) -> None:
        if zero_pattern(labels, edges) is not None:
            return
        c = canon_component(labels, edges)
        if not c.odd and c.key not in found:
            found[c.key] = CanonicalGraph(c.key, c.aut)

    for a, b in itertools.combinations_with_replacement(codes, 2):
        if max_edges >= 1:
            add([a, b], [(0, 1)])
    subsets = [s for r in range(len(codes) + 1) for s in itertools.combinations(codes, r)]
    m = 1
    while True:
        # a skeleton on m vertices needs at least m-1 edges; each vertex needs valency 3
        if m - 1 > max_edges:
            break
        grew = False
        for skel in connected_simple_graphs(m):
            deg = [0] * m
            for x, y in skel:
                deg[x] += 1
                deg[y] += 1
            need = sum(max(0, 3 - d) for d in deg)
            if len(skel) + need > max_edges:
                continue
            grew = True
            budget = max_edges - len(skel)

            def assign(v: int, left: int, chosen: list) -> None:
                if v == m:
                    labels = [0] * m
                    edges = list(skel)
                    for u, legs in enumerate(chosen):
                        for code in legs:
                            labels.append(code)
                            edges.append((u, len(labels) - 1))
                    add(labels, edges)
                    return
                rest = sum(max(0, 3 - d) for d in deg[v + 1 :])
                for s in subsets:
                    if len(s) + deg[v] < 3 or len(s) > left - rest:
                        continue
                    assign(v + 1, left - len(s), chosen + [s])

            assign(0, budget, [])
        if not grew and m > 2 and 3 * m / 2 > max_edges:
            break
        m += 1
    return [found[k] for k in sorted(found)]


# ---------------------------------------------------------------------------
# Serialization


def graph_to_json(g: FeynmanGraph | OrientedGraph | CanonicalGraph) -> dict:
    """Serialize to the JSON graph schema (``edge_order`` included)."""
    if isinstance(g, CanonicalGraph):
        g = from_vertex_form(*g.key)
    order = list(range(g.n_edges)) if isinstance(g, FeynmanGraph) else list(g.edge_order)
    fg = g if isinstance(g, FeynmanGraph) else g.graph
    return {
        "half_edges": fg.half_edges,
        "matching": [list(p) for p in fg.matching],
        "internal": [list(b) for b in fg.internal],
        "external": [{"h": h, "label": lab.to_json()} for h, lab in fg.external],
        "edge_order": order,
    }


def graph_from_json(data: Mapping | str, *, trivalent: bool = False) -> OrientedGraph:
    if isinstance(data, str):
        data = json.loads(data)
    g = validate_graph(data, trivalent=trivalent)
    # validate_graph sorts matching pairs; the matching order itself is preserved
    order = tuple(int(e) for e in data.get("edge_order", range(g.n_edges)))
    return OrientedGraph(g, order)


def graph_to_dot(g: CanonicalGraph | OrientedGraph, name: str = "G") -> str:
    """Graphviz DOT text; external vertices are labelled by their decoration."""
    labels, edges = g.key if isinstance(g, CanonicalGraph) else g.vertex_form()
    lines = [f"graph {name} {{"]
    for v, c in enumerate(labels):
        if c:
            lines.append(f'  v{v} [shape=plaintext, label="{Label.from_code(c)}"];')
        else:
            lines.append(f'  v{v} [shape=point];')
    for i, (a, b) in enumerate(edges):
        lines.append(f'  v{a} -- v{b} [label="E{i + 1}"];')
    lines.append("}")
    return "\n".join(lines)

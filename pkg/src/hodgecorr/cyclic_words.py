"""Cyclic words, shuffle relators, cobrackets and the expansion of a word into planar trees."""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from hodgecorr.graph_core import Label, permutation_sign
from hodgecorr.graph_complex import GraphVector

Letter = Hashable


def _order_key(letter: Letter) -> tuple[str, str]:
    return (type(letter).__name__, str(letter))


@dataclass(frozen=True, order=True)
class CyclicWord:
    """A cyclic word stored as its minimal rotation.

    >>> w = cyclic_normalize(["s1", "s2", "s1", "s2"])
    >>> w.aut_count, len(w)
    (2, 4)
    """

    letters: tuple
    aut_count: int = 1

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "C(" + " ".join(str(x) for x in self.letters) + ")"

    def rotations(self) -> list[tuple]:
        n = len(self.letters)
        return [self.letters[i:] + self.letters[:i] for i in range(n)]


def cyclic_normalize(letters: Sequence[Letter]) -> CyclicWord:
    """Minimal rotation (by a fixed total order on letters) and the number of rotations fixing the word."""
    letters = tuple(letters)
    if not letters:
        raise ValueError("a cyclic word needs at least one letter")
    n = len(letters)
    rots = [letters[i:] + letters[:i] for i in range(n)]
    best = min(rots, key=lambda r: [_order_key(x) for x in r])
    return CyclicWord(best, sum(1 for r in rots if r == letters))


def rotate(letters: Sequence[Letter], i: int) -> tuple:
    letters = tuple(letters)
    return letters[i:] + letters[:i]


def parse_word(text: str) -> tuple[str, ...]:
    """Comma-separated letters, e.g. ``"0,1,z"``."""
    letters = tuple(x.strip() for x in text.split(",") if x.strip())
    if not letters:
        raise ValueError(f"empty word {text!r}")
    return letters


# ---------------------------------------------------------------------------
# Shuffle relators


def shuffles(p: int, q: int) -> Iterable[tuple[int, ...]]:
    """``(p, q)``-shuffles as sequences of the indices ``1..p+q`` (first block keeps its order)."""
    for first in itertools.combinations(range(p + q), p):
        seq = [0] * (p + q)
        a, b = iter(range(1, p + 1)), iter(range(p + 1, p + q + 1))
        fs = set(first)
        for pos in range(p + q):
            seq[pos] = next(a) if pos in fs else next(b)
        yield tuple(seq)


def shuffle_relator(v0: Letter, block1: Sequence[Letter], block2: Sequence[Letter]) -> Counter:
    """``sum over shuffles of C(v0 v_s(1) ... v_s(p+q))`` as a multiset of cyclic words.

    >>> sorted(str(w) for w in shuffle_relator("a", ["b"], ["c"]))
    ['C(a b c)', 'C(a c b)']
    """
    if not block1 or not block2:
        raise ValueError("both shuffle blocks must be nonempty")
    letters = [None] + list(block1) + list(block2)
    out: Counter = Counter()
    for sh in shuffles(len(block1), len(block2)):
        out[cyclic_normalize([v0] + [letters[i] for i in sh])] += 1
    return out


def shuffle_words(v0: Letter, block1: Sequence[Letter], block2: Sequence[Letter]) -> list[tuple]:
    """Linear words (``v0`` first) of a shuffle relator, without cyclic normalization."""
    letters = [None] + list(block1) + list(block2)
    return [tuple([v0] + [letters[i] for i in sh]) for sh in shuffles(len(block1), len(block2))]


# ---------------------------------------------------------------------------
# Cobracket

S_LETTER = re.compile(r"^s\d+$")


def is_s_letter(x: Letter) -> bool:
    return isinstance(x, str) and bool(S_LETTER.match(x))


def basis_forms(genus: int) -> list[tuple[str, str, int]]:
    """``(alpha, alpha_dual, sign)``: the dual of ``a_k`` is ``A_k`` and the dual of ``A_k`` is ``-a_k``."""
    out = []
    for k in range(1, genus + 1):
        out.append((f"a{k}", f"A{k}", 1))
        out.append((f"A{k}", f"a{k}", -1))
    return out


Wedge = Counter


def add_wedge(acc: Wedge, left: Sequence[Letter], right: Sequence[Letter], coeff: int) -> None:
    """Add ``coeff * C(left) ^ C(right)`` in antisymmetric normal form."""
    a, b = cyclic_normalize(left), cyclic_normalize(right)
    if a == b:
        return
    if b < a:
        a, b, coeff = b, a, -coeff
    acc[(a, b)] += coeff
    if acc[(a, b)] == 0:
        del acc[(a, b)]


def cobracket_s(letters: Sequence[Letter]) -> Wedge:
    """Cut the disk from each S-labelled point to every boundary gap."""
    w = tuple(letters)
    n = len(w) - 1
    out: Wedge = Counter()
    for p in range(len(w)):
        if not is_s_letter(w[p]):
            continue
        g = rotate(w, p)
        for i in range(1, n + 1):
            add_wedge(out, (g[0],) + g[i:], g[:i], 1)
    return out


def cobracket_cas(letters: Sequence[Letter], genus: int) -> Wedge:
    """Cut the disk between two distinct gaps and cap both sides with a Casimir pair."""
    w = tuple(letters)
    L = len(w)
    out: Wedge = Counter()
    for i in range(L):
        for j in range(L):
            if i == j:
                continue
            part1 = tuple(w[(i + t) % L] for t in range((j - i) % L))
            part2 = tuple(w[(j + t) % L] for t in range((i - j) % L))
            for alpha, dual, sgn in basis_forms(genus):
                add_wedge(out, part1 + (alpha,), part2 + (dual,), sgn)
    return out


def cobracket(w: CyclicWord | Sequence[Letter], genus: int = 0) -> Wedge:
    """``delta_S + delta_Cas`` on a cyclic word, as a map ``(C1, C2) -> coefficient`` with ``C1 < C2``."""
    letters = w.letters if isinstance(w, CyclicWord) else tuple(w)
    out = cobracket_s(letters)
    for k, c in cobracket_cas(letters, genus).items():
        out[k] += c
    return Counter({k: c for k, c in out.items() if c})


# ---------------------------------------------------------------------------
# Planar trees


@dataclass(frozen=True)
class PlanarTree:
    """A uni-trivalent planar tree in vertex form.

    Vertices ``0..n-1`` are the legs in boundary order; internal vertices follow.
    ``rotation[v]`` lists the neighbours of ``v`` counterclockwise.
    """

    n_legs: int
    edges: tuple[tuple[int, int], ...]
    rotation: tuple[tuple[int, ...], ...]

    def boundary_order(self, root_leg: int = 0) -> tuple[int, ...]:
        """Edge indices in order of first appearance along the boundary walk starting at ``root_leg``."""
        eid = {}
        for i, (a, b) in enumerate(self.edges):
            eid[(a, b)] = eid[(b, a)] = i
        u, v = root_leg, self.rotation[root_leg][0]
        seen: list[int] = []
        for _ in range(2 * len(self.edges)):
            e = eid[(u, v)]
            if e not in seen:
                seen.append(e)
            rot = self.rotation[v]
            nxt = rot[(rot.index(u) + 1) % len(rot)]
            u, v = v, nxt
        return tuple(seen)

    def leg_order(self, root_leg: int = 0) -> tuple[int, ...]:
        """Legs in the order the boundary walk meets them."""
        order = []
        u, v = root_leg, self.rotation[root_leg][0]
        order.append(root_leg)
        for _ in range(2 * len(self.edges)):
            rot = self.rotation[v]
            if v < self.n_legs and v not in order:
                order.append(v)
            nxt = rot[(rot.index(u) + 1) % len(rot)]
            u, v = v, nxt
        return tuple(order)

    def canonical_orientation(self) -> tuple[int, ...]:
        return self.boundary_order(0)

    def orientation_sign(self, root_leg: int) -> int:
        """Parity between the walks from leg 0 and from ``root_leg``."""
        base = self.boundary_order(0)
        pos = {e: i for i, e in enumerate(base)}
        return permutation_sign([pos[e] for e in self.boundary_order(root_leg)])

    def oriented_edges(self) -> list[tuple[int, int]]:
        return [self.edges[i] for i in self.canonical_orientation()]

    def internal_vertices(self) -> list[int]:
        return list(range(self.n_legs, len(self.rotation)))

    def leg_neighbour(self, leg: int) -> int:
        return self.rotation[leg][0]


def _binary_splits(lo: int, hi: int):
    """Planar binary trees over the leaf interval ``lo..hi`` as nested tuples."""
    if lo == hi:
        yield lo
        return
    for k in range(lo, hi):
        for left in _binary_splits(lo, k):
            for right in _binary_splits(k + 1, hi):
                yield (left, right)


def planar_trees(n: int) -> list[PlanarTree]:
    """All planar uni-trivalent trees with ``n`` legs ``0..n-1`` in counterclockwise order."""
    if n < 2:
        raise ValueError("need at least two legs")
    if n == 2:
        return [PlanarTree(2, ((0, 1),), ((1,), (0,)))]
    out = []
    for shape in _binary_splits(1, n - 1):
        nbrs: dict[int, list[int]] = {i: [] for i in range(n)}
        edges: list[tuple[int, int]] = []
        counter = [n]

        def build(node, parent: int) -> int:
            if isinstance(node, int):
                nbrs[node].append(parent)
                edges.append((parent, node))
                return node
            v = counter[0]
            counter[0] += 1
            nbrs[v] = [parent]
            edges.append((parent, v))
            left = build(node[0], v)
            right = build(node[1], v)
            nbrs[v] += [left, right]
            return v

        root = counter[0]
        counter[0] += 1
        nbrs[root] = [0]
        edges.append((0, root))
        nbrs[0].append(root)
        a = build(shape[0], root)
        b = build(shape[1], root)
        nbrs[root] += [a, b]
        rotation = tuple(tuple(nbrs[v]) for v in range(counter[0]))
        out.append(PlanarTree(n, tuple(edges), rotation))
    return out


def letter_code(letter: Letter) -> int:
    """Label code of a symbolic letter ``s<i>``, ``a<i>`` (holomorphic) or ``A<i>`` (antiholomorphic)."""
    if isinstance(letter, Label):
        return letter.code
    m = re.match(r"^([saA])(\d+)$", str(letter))
    if not m:
        raise ValueError(f"letter {letter!r} is not a graph decoration")
    kind = {"s": "s", "a": "hol", "A": "antihol"}[m.group(1)]
    return Label(kind, int(m.group(2))).code


def planar_tree_expansion(w: CyclicWord | Sequence[Letter]) -> list[tuple[PlanarTree, tuple[int, ...]]]:
    """Planar trees whose boundary reads ``w``, each with its canonical edge order.

    >>> [len(planar_tree_expansion("abcd"[:k])) for k in (2, 3, 4)]
    [1, 1, 2]
    """
    letters = w.letters if isinstance(w, CyclicWord) else tuple(w)
    return [(t, t.canonical_orientation()) for t in planar_trees(len(letters))]


def expansion_vector(w: CyclicWord | Sequence[Letter]) -> GraphVector:
    """``sum_T (T, W; Or_T)`` as a graph vector; letters must be decoration symbols."""
    letters = w.letters if isinstance(w, CyclicWord) else tuple(w)
    codes = [letter_code(x) for x in letters]
    out = GraphVector()
    for t, order in planar_tree_expansion(letters):
        labels = codes + [0] * (len(t.rotation) - t.n_legs)
        out.add_graph(labels, [t.edges[i] for i in order], 1)
    return out

"""Truncated formal effective action and the exact quantum master equation residual.

The action is the canonical element ``sum_G hbar^l(G) / |Aut G| * G (x) dual(G)``
over connected uni-trivalent graphs with at most one loop.  The residual
``(d (x) 1) s - 1/2 [s, s] - hbar (1 (x) delta) s`` is grouped by the first
factor and each second factor is reduced modulo IHX.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from hodgecorr.graph_complex import (
    GraphVector,
    Monomial,
    _sort_components,
    degree,
    n_edges,
)
from hodgecorr.graph_core import (
    CanonicalGraph,
    Key,
    alphabet,
    canon_component,
    enumerate_graphs,
    loop_number,
)
from hodgecorr.graph_homology import (
    IhxClass,
    _bracket_image,
    _delta_image,
    dual_key,
    reduce_vector,
)
from hodgecorr.graph_complex import _component_image

#: Sign ``(-1)^(|G1'| |G2|)`` moving the second factor of the first term past the first factor of the second.
BRACKET_KOSZUL = False
#: Sign ``(-1)^|G|`` moving delta past the first factor.
DELTA_KOSZUL = False


@dataclass(frozen=True)
class ActionTerm:
    first: Key
    second: Key
    second_sign: int
    coeff: Fraction
    hbar: int

    @property
    def graph(self) -> CanonicalGraph:
        return CanonicalGraph(self.first)


@dataclass
class TruncatedAction:
    terms: list[ActionTerm]
    cutoff: int
    k: int
    genus: int
    index: dict[Key, ActionTerm] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.index = {t.first: t for t in self.terms}

    def __len__(self) -> int:
        return len(self.terms)


def _multisets(codes: list[int], max_size: int):
    for n in range(1, max_size + 1):
        yield from itertools.combinations_with_replacement(codes, n)


def build_action(k: int, genus: int, cutoff: int) -> TruncatedAction:
    """All nonzero connected uni-trivalent graphs with legs in the alphabet, loops <= 1, edges <= cutoff.

    >>> a = build_action(2, 0, 1)
    >>> [(str(t.graph), t.coeff, t.hbar) for t in a.terms]
    [('G[s1,s2|0-1]', Fraction(1, 1), 0)]
    """
    if k < 0 or genus < 0 or (k == 0 and genus == 0):
        raise ValueError("need at least one S-point or genus >= 1")
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    codes = alphabet(k, genus)
    terms: dict[Key, ActionTerm] = {}
    max_legs = (cutoff + 3) // 2
    for ms in _multisets(codes, max_legs):
        for g in enumerate_graphs(list(ms), 1, cutoff):
            if g.key in terms:
                continue
            dk, sign = dual_key(g.key)
            terms[g.key] = ActionTerm(g.key, dk, sign, Fraction(1, g.aut), loop_number(*g.key))
    return TruncatedAction([terms[key] for key in sorted(terms)], cutoff, k, genus)


Status = Literal["zero", "nonzero", "skipped"]


def monomial_loops(mono: Monomial) -> int:
    return sum(loop_number(*k) for k in mono)


def closure_safe(mono: Monomial, cutoff: int) -> bool:
    """Every graph that can feed this first factor is inside the truncation.

    Preimages have at most one more edge; connected uni-trivalent factors also
    receive cuts of graphs with one more loop.
    """
    if n_edges(mono) + 1 > cutoff:
        return False
    loops = monomial_loops(mono)
    if len(mono) == 1:
        labels, edges = mono[0]
        defect = 2 * len(edges) - 3 * labels.count(0) - (len(labels) - labels.count(0))
        if defect == 0:
            return loops == 0
    return loops <= 1


@dataclass
class Residual:
    components: dict[Monomial, GraphVector]
    safe: dict[Monomial, bool]
    classes: dict[Monomial, IhxClass]

    def status(self, mono: Monomial) -> Status:
        if not self.safe[mono]:
            return "skipped"
        return "zero" if self.classes[mono].is_zero() else "nonzero"

    def counts(self) -> dict[str, int]:
        out = {"zero": 0, "nonzero": 0, "skipped": 0}
        for m in self.components:
            out[self.status(m)] += 1
        return out

    @property
    def ok(self) -> bool:
        return all(self.status(m) != "nonzero" for m in self.components)

    def report(self) -> list[dict]:
        rows = []
        for m in sorted(self.components):
            st = self.status(m)
            row: dict = {"component": " ^ ".join(str(CanonicalGraph(k)) for k in m), "status": st}
            if st == "nonzero":
                row["witness"] = [
                    {"graph": str(CanonicalGraph(t[0])), "coeff": str(c)} for t, c in self.classes[m].representative
                ]
            rows.append(row)
        return rows

    def to_json(self) -> str:
        return json.dumps(self.report(), indent=2)


def _add(acc: dict[Monomial, GraphVector], mono: Monomial, second: Monomial, coeff: Fraction) -> None:
    acc.setdefault(mono, GraphVector()).add(second, coeff)


def qme_residual(
    action: TruncatedAction,
    parts: tuple[str, ...] = ("d", "bracket", "delta"),
    only_safe: bool = True,
) -> Residual:
    """Exact residual per first-factor monomial.

    Components that are not closure-safe are reported as skipped; with
    ``only_safe`` false they are reduced anyway, which exposes truncation
    artefacts.
    """
    cutoff, genus = action.cutoff, action.genus
    acc: dict[Monomial, GraphVector] = {}
    limit = cutoff + 1

    def wanted(mono: Monomial) -> bool:
        return n_edges(mono) <= limit

    ops = [("delta", 0), ("s", 0)] + ([("cas", genus)] if genus else [])
    for t in action.terms:
        sec = (t.second,)
        if "d" in parts or "d_delta" in parts:
            use = ops if "d" in parts else [("delta", 0)]
            for which, g in use:
                for mono, c in _component_image(t.first, which, g):
                    if wanted(mono):
                        _add(acc, mono, sec, c * t.coeff * t.second_sign)
        if "delta" in parts and wanted((t.first,)):
            sgn = -1 if DELTA_KOSZUL and len(t.first[1]) & 1 else 1
            for m2, c in _delta_image(t.second):
                _add(acc, (t.first,), m2, -sgn * c * t.coeff * t.second_sign)
        if "bracket" in parts:
            for u in action.terms:
                if len(t.first[1]) + len(u.first[1]) > limit:
                    continue
                img = _bracket_image(t.second, u.second)
                if not img:
                    continue
                res = _sort_components([(t.first, len(t.first[1])), (u.first, len(u.first[1]))])
                if res is None:
                    continue
                mono, s = res
                if BRACKET_KOSZUL and len(t.second[1]) & len(u.first[1]) & 1:
                    s = -s
                w = Fraction(-1, 2) * s * t.coeff * u.coeff * t.second_sign * u.second_sign
                for m2, c in img:
                    _add(acc, mono, m2, w * c)
    safe = {m: closure_safe(m, cutoff) for m in acc}
    classes = {}
    for m, v in acc.items():
        if safe[m] or not only_safe:
            classes[m] = reduce_vector(v)
    if not only_safe:
        safe = {m: True for m in acc}
    return Residual(acc, safe, classes)


def orbit_stabilizer_pairs(key: Key) -> list[tuple[int, int, int, int]]:
    """For each edge ``e``: ``(|Aut G . e|, |Aut G|, |Aut(G - e) . e|, |Aut(G - e)|)``.

    ``G - e`` keeps both ends of ``e`` as marked distinct legs; its automorphisms
    are those of ``G`` fixing ``e`` up to flipping.
    """
    labels, edges = key
    aut = canon_component(labels, edges).aut
    out = []
    # edge orbits under Aut(G): edges whose marked graphs are isomorphic
    marks = []
    for p in range(len(edges)):
        marks.append(_marked_key(labels, edges, p))
    for p in range(len(edges)):
        orbit = sum(1 for q in range(len(edges)) if marks[q][0] == marks[p][0])
        stab = marks[p][1]
        out.append((orbit, aut, 1, stab))
    return out


MARK = 999_999


def _marked_key(labels, edges, p):
    """Canonical key and automorphism count of ``G`` with edge ``p`` subdivided by a marked vertex."""
    n = len(labels)
    a, b = edges[p]
    new_labels = list(labels) + [MARK]
    new_edges = [e for q, e in enumerate(edges) if q != p] + [(a, n), (n, b)]
    # the marked vertex has valency 2; colour refinement still separates it by its label
    c = canon_component(new_labels, new_edges)
    # an automorphism swapping the two halves of the subdivided edge flips e; both halves are one edge of G
    return c.key, c.aut // (2 if a == b else 1)

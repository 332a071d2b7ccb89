"""Pure-Python canonical labeling by colour refinement and exhaustive individualization.

This is the fallback for the compiled ``_canon_ext`` module; both expose
``canonical_leaves`` with identical semantics.
"""

from __future__ import annotations


def _refine(col: list[int], adj: list[list[int]], n: int) -> tuple[list[int], int]:
    k = -1
    while True:
        sig = [(col[v], tuple(sorted([col[w] for w in adj[v]]))) for v in range(n)]
        uniq = sorted(set(sig))
        idx = {s: i for i, s in enumerate(uniq)}
        col = [idx[s] for s in sig]
        if len(uniq) == k:
            return col, k
        k = len(uniq)


def canonical_leaves(
    n: int, colors: list[int], edges: list[tuple[int, int]]
) -> tuple[tuple[tuple[int, int], ...], list[list[int]]]:
    """Return the minimal relabelled edge code and every labeling reaching it.

    Each labeling is a list ``perm`` with ``perm[old] = new``. The number of
    labelings equals the number of colour-preserving vertex automorphisms.
    """
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    best: list = [None]
    leaves: list[list[int]] = []

    def rec(col: list[int]) -> None:
        col, k = _refine(col, adj, n)
        if k == n:
            code = tuple(sorted((col[a], col[b]) if col[a] <= col[b] else (col[b], col[a]) for a, b in edges))
            if best[0] is None or code < best[0]:
                best[0] = code
                leaves.clear()
                leaves.append(col)
            elif code == best[0]:
                leaves.append(col)
            return
        size: dict[int, int] = {}
        for c in col:
            size[c] = size.get(c, 0) + 1
        target = min(c for c, s in size.items() if s > 1)
        base = [2 * c + 1 for c in col]
        for v in range(n):
            if col[v] == target:
                nxt = base[:]
                nxt[v] = 2 * target
                rec(nxt)

    if n == 0:
        return (), [[]]
    rec(list(colors))
    return best[0], leaves

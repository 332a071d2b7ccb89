# cython: boundscheck=False, wraparound=False
"""Compiled canonical labeling; same contract as ``_canon_py.canonical_leaves``."""


cdef list _refine(list col, list adj, int n):
    cdef int k = -1, v, w
    cdef list sig, uniq
    cdef dict idx
    while True:
        sig = []
        for v in range(n):
            sig.append((col[v], tuple(sorted([col[w] for w in adj[v]]))))
        uniq = sorted(set(sig))
        idx = {s: i for i, s in enumerate(uniq)}
        col = [idx[s] for s in sig]
        if len(uniq) == k:
            return [col, k]
        k = len(uniq)


cdef class _Search:
    cdef int n
    cdef list adj
    cdef list edges
    cdef object best
    cdef list leaves

    def __init__(self, int n, list edges):
        self.n = n
        self.edges = edges
        self.adj = [[] for _ in range(n)]
        for a, b in edges:
            self.adj[a].append(b)
            self.adj[b].append(a)
        self.best = None
        self.leaves = []

    cdef void rec(self, list col):
        cdef int k, v, a, b, ca, cb, target
        cdef list res = _refine(col, self.adj, self.n)
        col = res[0]
        k = res[1]
        if k == self.n:
            pairs = []
            for a, b in self.edges:
                ca = col[a]
                cb = col[b]
                pairs.append((ca, cb) if ca <= cb else (cb, ca))
            code = tuple(sorted(pairs))
            if self.best is None or code < self.best:
                self.best = code
                self.leaves = [col]
            elif code == self.best:
                self.leaves.append(col)
            return
        size = {}
        for v in range(self.n):
            size[col[v]] = size.get(col[v], 0) + 1
        target = min([c for c, s in size.items() if s > 1])
        base = [2 * c + 1 for c in col]
        for v in range(self.n):
            if col[v] == target:
                nxt = list(base)
                nxt[v] = 2 * target
                self.rec(nxt)


def canonical_leaves(int n, colors, edges):
    if n == 0:
        return (), [[]]
    cdef _Search s = _Search(n, [tuple(e) for e in edges])
    s.rec(list(colors))
    return s.best, s.leaves

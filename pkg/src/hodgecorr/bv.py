"""Finite-dimensional BV algebra on Darboux coordinates ``x_1..x_m`` (even) and ``y_1..y_m`` (odd).

A term is keyed by ``(xexp, ys, hbar, t)``: the exponent vector of the even
variables, the increasing tuple of odd indices present, the power of the
formal parameter and the power of the homotopy parameter ``t``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

TermKey = tuple[tuple[int, ...], tuple[int, ...], int, int]


class BVError(ValueError):
    pass


def _merge_odd(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[tuple[int, ...], int] | None:
    """Product of odd monomials ``y_a * y_b`` as a sorted tuple with its sign."""
    if set(a) & set(b):
        return None
    seq = list(a) + list(b)
    inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return tuple(sorted(seq)), -1 if inversions & 1 else 1


class BVPolynomial:
    """Polynomial in ``x``, ``y``, ``hbar`` and ``t`` with exact rational coefficients."""

    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms: Mapping[TermKey, Fraction | int] | None = None) -> None:
        self.m = m
        self.terms: dict[TermKey, Fraction] = {}
        for k, c in (terms or {}).items():
            if c:
                self.terms[k] = self.terms.get(k, 0) + Fraction(c)
        self.terms = {k: c for k, c in self.terms.items() if c}

    # construction -----------------------------------------------------

    @classmethod
    def const(cls, m: int, c: Fraction | int = 1) -> "BVPolynomial":
        return cls(m, {((0,) * m, (), 0, 0): c})

    @classmethod
    def x(cls, m: int, i: int) -> "BVPolynomial":
        e = [0] * m
        e[i - 1] = 1
        return cls(m, {(tuple(e), (), 0, 0): 1})

    @classmethod
    def y(cls, m: int, i: int) -> "BVPolynomial":
        return cls(m, {((0,) * m, (i,), 0, 0): 1})

    @classmethod
    def hbar(cls, m: int) -> "BVPolynomial":
        return cls(m, {((0,) * m, (), 1, 0): 1})

    @classmethod
    def t(cls, m: int) -> "BVPolynomial":
        return cls(m, {((0,) * m, (), 0, 1): 1})

    # algebra ------------------------------------------------------------

    def __iter__(self) -> Iterator[tuple[TermKey, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        return isinstance(other, BVPolynomial) and self.terms == other.terms

    def __add__(self, other: "BVPolynomial") -> "BVPolynomial":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return BVPolynomial(self.m, out)

    def __neg__(self) -> "BVPolynomial":
        return BVPolynomial(self.m, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "BVPolynomial") -> "BVPolynomial":
        return self + (-other)

    def __mul__(self, other: "BVPolynomial | Fraction | int") -> "BVPolynomial":
        if not isinstance(other, BVPolynomial):
            return BVPolynomial(self.m, {k: c * other for k, c in self.terms.items()})
        out: dict[TermKey, Fraction] = {}
        for (xa, ya, ha, ta), ca in self.terms.items():
            for (xb, yb, hb, tb), cb in other.terms.items():
                merged = _merge_odd(ya, yb)
                if merged is None:
                    continue
                ys, s = merged
                key = (tuple(p + q for p, q in zip(xa, xb)), ys, ha + hb, ta + tb)
                out[key] = out.get(key, 0) + s * ca * cb
        return BVPolynomial(self.m, out)

    def __rmul__(self, other: Fraction | int) -> "BVPolynomial":
        return self * other

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (xe, ys, h, t), c in self:
            mono = [f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}" for i, e in enumerate(xe) if e]
            mono += [f"y{i}" for i in ys]
            mono += ["hbar" + (f"^{h}" if h > 1 else "")] if h else []
            mono += ["t" + (f"^{t}" if t > 1 else "")] if t else []
            parts.append(f"{c}*{'*'.join(mono) or '1'}")
        return " + ".join(parts)

    # grading ------------------------------------------------------------

    def parities(self) -> set[int]:
        return {len(k[1]) & 1 for k in self.terms}

    def parity(self) -> int:
        """Parity of a homogeneous element; zero counts as even."""
        ps = self.parities()
        if len(ps) > 1:
            raise BVError("inhomogeneous element has no parity")
        return ps.pop() if ps else 0

    def homogeneous_parts(self) -> list["BVPolynomial"]:
        parts = []
        for p in (0, 1):
            sub = {k: c for k, c in self.terms.items() if len(k[1]) & 1 == p}
            if sub:
                parts.append(BVPolynomial(self.m, sub))
        return parts

    def truncate_hbar(self, order: int) -> "BVPolynomial":
        return BVPolynomial(self.m, {k: c for k, c in self.terms.items() if k[2] <= order})

    # derivatives --------------------------------------------------------

    def dx(self, i: int) -> "BVPolynomial":
        out = {}
        for (xe, ys, h, t), c in self.terms.items():
            e = xe[i - 1]
            if e:
                nx = list(xe)
                nx[i - 1] -= 1
                out[(tuple(nx), ys, h, t)] = c * e
        return BVPolynomial(self.m, out)

    def dy(self, i: int) -> "BVPolynomial":
        """Left derivative: move ``y_i`` to the front, then drop it."""
        out = {}
        for (xe, ys, h, t), c in self.terms.items():
            if i in ys:
                p = ys.index(i)
                out[(xe, tuple(j for j in ys if j != i), h, t)] = c * (-1 if p & 1 else 1)
        return BVPolynomial(self.m, out)

    def dt(self) -> "BVPolynomial":
        out = {}
        for (xe, ys, h, t), c in self.terms.items():
            if t:
                out[(xe, ys, h, t - 1)] = c * t
        return BVPolynomial(self.m, out)


def bv_laplacian(f: BVPolynomial) -> BVPolynomial:
    """``sum_i d/dx_i d/dy_i``.

    >>> m = 1
    >>> bv_laplacian(BVPolynomial.x(m, 1) * BVPolynomial.y(m, 1))
    1*1
    """
    out = BVPolynomial(f.m)
    for i in range(1, f.m + 1):
        out = out + f.dy(i).dx(i)
    return out


def bracket_via_laplacian(f: BVPolynomial, g: BVPolynomial) -> BVPolynomial:
    """``Delta(fg) - Delta(f) g - (-1)^|f| f Delta(g)``, extended bilinearly over homogeneous parts."""
    out = BVPolynomial(f.m)
    for fp in f.homogeneous_parts():
        sgn = -1 if fp.parity() else 1
        out = out + bv_laplacian(fp * g) - bv_laplacian(fp) * g - fp * bv_laplacian(g) * sgn
    return out


def bracket_via_derivatives(f: BVPolynomial, g: BVPolynomial) -> BVPolynomial:
    """``sum_i (-1)^|f| df/dx_i dg/dy_i + df/dy_i dg/dx_i``."""
    out = BVPolynomial(f.m)
    for fp in f.homogeneous_parts():
        sgn = -1 if fp.parity() else 1
        for i in range(1, f.m + 1):
            out = out + fp.dx(i) * g.dy(i) * sgn + fp.dy(i) * g.dx(i)
    return out


def gerstenhaber(f: BVPolynomial, g: BVPolynomial) -> BVPolynomial:
    """Gerstenhaber bracket; both defining formulas are evaluated and must agree.

    >>> gerstenhaber(BVPolynomial.x(1, 1), BVPolynomial.y(1, 1))
    1*1
    """
    a = bracket_via_laplacian(f, g)
    b = bracket_via_derivatives(f, g)
    if a != b:
        raise BVError(f"bracket formulas disagree: {a!r} vs {b!r}")
    return a


def jacobi_residual(f: BVPolynomial, g: BVPolynomial, h: BVPolynomial) -> BVPolynomial:
    """Graded Jacobi defect for homogeneous ``f, g, h``.

    With ``{f,g} = Delta(fg) - ...`` as defined here the bracket differs from the
    symmetric normalization by ``(-1)^|f|``, so the identity reads
    ``{f,{g,h}} = -(-1)^|f| {{f,g},h} + (-1)^((|f|+1)(|g|+1)) {g,{f,h}}``.
    """
    pf = f.parity() if f else 0
    pg = g.parity() if g else 0
    br = bracket_via_laplacian
    return br(f, br(g, h)) + br(br(f, g), h) * (-1) ** pf - br(g, br(f, h)) * (-1) ** ((pf + 1) * (pg + 1))


def qme_pointwise(S: BVPolynomial, hbar_order: int | None = None) -> BVPolynomial:
    """``1/2 {S,S} + hbar Delta S`` truncated at the given hbar order."""
    if S.parities() - {0}:
        raise BVError("the master equation needs an even S")
    r = gerstenhaber(S, S) * Fraction(1, 2) + BVPolynomial.hbar(S.m) * bv_laplacian(S)
    return r.truncate_hbar(hbar_order) if hbar_order is not None else r


def qme_homotopy(
    A: BVPolynomial, B: BVPolynomial, hbar_order: int | None = None
) -> tuple[BVPolynomial, BVPolynomial]:
    """Both component equations of the homotopy master equation for ``A(t) + B(t) dt``.

    ``A`` must be even and ``B`` odd; ``t`` enters polynomially.
    """
    if A.parities() - {0}:
        raise BVError("A(t) must be even")
    if B.parities() - {1}:
        raise BVError("B(t) must be odd")
    h = BVPolynomial.hbar(A.m)
    first = gerstenhaber(A, A) * Fraction(1, 2) + h * bv_laplacian(A)
    second = A.dt() + gerstenhaber(B, A) + h * bv_laplacian(B)
    if hbar_order is not None:
        first, second = first.truncate_hbar(hbar_order), second.truncate_hbar(hbar_order)
    return first, second


def qme_check(
    S: BVPolynomial,
    mode: str = "pointwise",
    B: BVPolynomial | None = None,
    hbar_order: int | None = None,
) -> BVPolynomial | tuple[BVPolynomial, BVPolynomial]:
    """Residual of the master equation (``pointwise``) or the homotopy equation (``homotopy``)."""
    if mode == "pointwise":
        return qme_pointwise(S, hbar_order)
    if mode == "homotopy":
        return qme_homotopy(S, B if B is not None else BVPolynomial(S.m), hbar_order)
    raise BVError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# Linear changes of Darboux coordinates


def substitute(f: BVPolynomial, mx: Sequence[Sequence[Fraction]], my: Sequence[Sequence[Fraction]]) -> BVPolynomial:
    """Replace ``x_i`` by ``sum_j mx[i][j] x_j`` and ``y_i`` by ``sum_j my[i][j] y_j``."""
    m = f.m
    xs = [sum((BVPolynomial.x(m, j + 1) * mx[i][j] for j in range(m)), BVPolynomial(m)) for i in range(m)]
    ys = [sum((BVPolynomial.y(m, j + 1) * my[i][j] for j in range(m)), BVPolynomial(m)) for i in range(m)]
    out = BVPolynomial(m)
    for (xe, yset, h, t), c in f.terms.items():
        term = BVPolynomial(m, {((0,) * m, (), h, t): c})
        for i, e in enumerate(xe):
            for _ in range(e):
                term = term * xs[i]
        for i in yset:
            term = term * ys[i - 1]
        out = out + term
    return out


def inverse_transpose(mat: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Exact ``(M^-1)^T`` by Gauss-Jordan elimination."""
    n = len(mat)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                fac = aug[r][col]
                aug[r] = [a - fac * b for a, b in zip(aug[r], aug[col])]
    inverse = [row[n:] for row in aug]
    return [[inverse[j][i] for j in range(n)] for i in range(n)]


def random_polynomial(
    rng: random.Random, m: int, max_degree: int = 4, n_terms: int = 5, parity: int | None = None
) -> BVPolynomial:
    """Random polynomial with small integer coefficients, optionally of fixed parity."""
    terms = {}
    for _ in range(n_terms):
        while True:
            ys = tuple(sorted(rng.sample(range(1, m + 1), rng.randint(0, m))))
            if parity is None or len(ys) % 2 == parity:
                break
        room = max(0, max_degree - len(ys))
        xe = [0] * m
        for _ in range(rng.randint(0, room)):
            xe[rng.randrange(m)] += 1
        terms[(tuple(xe), ys, 0, 0)] = Fraction(rng.randint(-3, 3))
    return BVPolynomial(m, terms)

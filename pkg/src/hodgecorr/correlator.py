"""Numerical correlator integrals at genus 0.

Every integrand is a product of Green-function forms ``log|x - y|`` and
``d^c log|x - y|`` over the internal vertices.  With the columns ordered
``dx_1, dxbar_1, dx_2, ...`` the top-degree coefficient is a determinant, and
``dx ^ dxbar = -2i dA`` turns it into a density.  One internal vertex is
integrated by a polar product rule around each singular point; more vertices
use importance-sampled Monte Carlo.

Values are reported as the coefficient of ``(2 pi i)^(-pi_power)``.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

import mpmath
import numpy as np

from hodgecorr.cyclic_words import PlanarTree, planar_trees
from hodgecorr.graph_core import (
    CanonicalGraph,
    GraphError,
    OrientedGraph,
    is_s_code,
    Label,
    loop_number,
    zero_pattern,
)
from hodgecorr.green import TWO_PI_I, twistor_propagator_p1

# ---------------------------------------------------------------------------
# Polylogarithms


def _bernoulli_weights(n: int) -> list[mpmath.mpf]:
    # coefficients 2^k B_k / k! of 2t / (exp(2t) - 1)
    return [mpmath.mpf(2) ** k * mpmath.bernoulli(k) / mpmath.factorial(k) for k in range(n)]


def _check_point(z: complex) -> complex:
    z = complex(z)
    if z == 0 or z == 1:
        raise ValueError(f"single-valued polylogarithm is singular at {z}")
    return z


def sv_polylog(n: int, z: complex) -> complex:
    """Single-valued polylogarithm ``L_n(z)``: real for odd ``n``, purely imaginary for even ``n``.

    >>> abs(sv_polylog(2, 1j) - 1j * float(mpmath.catalan)) < 1e-14
    True
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    z = _check_point(z)
    if z.imag == 0 and z.real > 1:
        # both one-sided limits agree; pick the upper one consistently for every Li_k
        z = complex(z.real, 1e-300)
    zm = mpmath.mpc(z)
    lg = mpmath.log(abs(zm))
    w = _bernoulli_weights(n)
    s = mpmath.fsum(w[k] * mpmath.polylog(n - k, zm) * lg**k for k in range(n))
    if n % 2:
        return complex(float(mpmath.re(s)), 0.0)
    return complex(0.0, float(mpmath.im(s)))


def levin_coefficient(n: int, k: int) -> Fraction:
    """``2^k (n-2)! (2n-k-3)! / ((2n-3)! (k+1)! (n-k-2)!)``."""
    f = math.factorial
    return Fraction(2**k * f(n - 2) * f(2 * n - k - 3), f(2 * n - 3) * f(k + 1) * f(n - k - 2))


def levin_polylog(n: int, z: complex) -> complex:
    """Levin's polylogarithm: a ``log|z|``-weighted sum of ``L_{n-k}`` over even ``k <= n - 2``.

    >>> levin_polylog(2, 0.3 + 0.4j) == sv_polylog(2, 0.3 + 0.4j)
    True
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    z = _check_point(z)
    lg = math.log(abs(z))
    total = 0j
    for k in range(0, n - 1, 2):
        total += float(levin_coefficient(n, k)) * sv_polylog(n - k, z) * lg**k
    return total


def bloch_wigner(z: complex) -> float:
    """``Im Li_2(z) + arg(1 - z) log|z|``; ``L_2 = i D``."""
    z = _check_point(z)
    if z.imag == 0 and z.real > 1:
        z = complex(z.real, 1e-300)
    return float(mpmath.im(mpmath.polylog(2, z))) + math.atan2(-z.imag, 1 - z.real) * math.log(abs(z))


# ---------------------------------------------------------------------------
# Configuration and results


@dataclass(frozen=True)
class QuadratureConfig:
    """Integration settings.

    ``scheme`` ``auto`` uses the polar product rule for one internal vertex and
    Monte Carlo otherwise.  Monte Carlo runs in blocks with seeds spawned from
    ``seed``, reduced in block order.
    """

    scheme: Literal["auto", "adaptive-2d", "monte-carlo"] = "auto"
    panels: int = 74
    order: int = 12
    angles: int = 128
    log_range: tuple[float, float] = (-25.0, 12.0)
    samples: int = 2_000_000
    block: int = 250_000
    seed: int = 0
    tol: float = 1e-3
    threads: int | None = None

    def n_threads(self) -> int:
        if self.threads is not None:
            return max(1, self.threads)
        env = os.environ.get("HODGECORR_THREADS")
        if env:
            return max(1, int(env))
        return min(4, os.cpu_count() or 1)


@dataclass
class CorrelatorResult:
    value: complex
    error: float
    pi_power: int
    samples: int = 0
    label: str = ""
    u: complex | None = None
    flag: str | None = None
    form: str = "scalar"

    def actual(self) -> complex:
        return self.value * TWO_PI_I ** (-self.pi_power)

    def to_dict(self) -> dict:
        out = {
            "label": self.label,
            "u": None if self.u is None else [self.u.real, self.u.imag],
            "value_re": self.value.real,
            "value_im": self.value.imag,
            "pi_power": self.pi_power,
            "err": self.error,
            "samples": self.samples,
            "form": self.form,
        }
        if self.flag:
            out["flag"] = self.flag
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# ---------------------------------------------------------------------------
# Integrands


@dataclass(frozen=True)
class FormEdge:
    """One edge ``x_a - x_b``; an endpoint is an internal vertex index or a fixed position."""

    a: int | complex
    b: int | complex


@dataclass
class Integrand:
    """``G(g_edge) * wedge of 1-forms on the other edges`` over ``n_vertices`` internal points.

    ``hol``/``antihol`` weight the ``d`` and ``dbar`` parts of each 1-form
    (``(1, 1)`` gives ``d^c``; ``(u, 1 - u)`` the twistor propagator).
    The prefactor multiplies the density.
    """

    n_vertices: int
    forms: list[FormEdge]
    g_edge: FormEdge | None = None
    hol: complex = 1.0
    antihol: complex = 1.0
    prefactor: complex = 1.0
    anchors: list[complex] = field(default_factory=list)

    def __post_init__(self) -> None:
        if len(self.forms) != 2 * self.n_vertices:
            raise ValueError("need exactly two 1-forms per internal vertex for a top-degree integrand")

    def exactly_zero(self) -> bool:
        """Two identical 1-forms, or a column that no 1-form touches."""
        seen = set()
        for e in self.forms:
            key = frozenset([("v", e.a) if isinstance(e.a, int) else ("p", e.a), ("v", e.b) if isinstance(e.b, int) else ("p", e.b)])
            if key in seen:
                return True
            seen.add(key)
        if self.hol == 0 or self.antihol == 0:
            return True
        return False

    def density(self, X: np.ndarray) -> np.ndarray:
        """Density at sample points ``X`` of shape ``(N, n_vertices)``."""
        N, V = X.shape
        M = np.zeros((N, 2 * V, 2 * V), dtype=complex)

        def coord(p):
            return X[:, p] if isinstance(p, int) else np.full(N, complex(p))

        for row, e in enumerate(self.forms):
            d = coord(e.a) - coord(e.b)
            p = self.hol * 0.5 / d
            q = -self.antihol * 0.5 / np.conj(d)
            if isinstance(e.a, int):
                M[:, row, 2 * e.a] += p
                M[:, row, 2 * e.a + 1] += q
            if isinstance(e.b, int):
                M[:, row, 2 * e.b] -= p
                M[:, row, 2 * e.b + 1] -= q
        out = np.linalg.det(M) * ((-2j) ** V) * self.prefactor
        if self.g_edge is not None:
            out = out * np.log(np.abs(coord(self.g_edge.a) - coord(self.g_edge.b)))
        return out


def _polar_rule(cfg: QuadratureConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    lo, hi = cfg.log_range
    edges = np.linspace(lo, hi, cfg.panels + 1)
    t, w = np.polynomial.legendre.leggauss(cfg.order)
    s = np.concatenate([(b - a) / 2 * t + (a + b) / 2 for a, b in zip(edges[:-1], edges[1:])])
    sw = np.concatenate([(b - a) / 2 * w for a, b in zip(edges[:-1], edges[1:])])
    r = np.exp(s)
    th = np.arange(cfg.angles) * (2 * np.pi / cfg.angles)
    return r, sw * r * r, th  # dA = r dr dtheta = r^2 ds dtheta


def integrate_one_vertex(f: Integrand, cfg: QuadratureConfig) -> tuple[complex, float]:
    """Polar product rule around each singular point with a partition of unity ``|x - a_j|^-4``.

    The error estimate compares against the rule with half the radial panels and angles.
    """

    def run(c: QuadratureConfig) -> complex:
        anchors = list(dict.fromkeys(complex(a) for a in f.anchors))
        r, rw, th = _polar_rule(c)
        total = 0j
        for j, a in enumerate(anchors):
            X = a + r[:, None] * np.exp(1j * th[None, :])
            with np.errstate(divide="ignore"):
                ws = np.array([np.abs(X - b) ** -4.0 for b in anchors])
            wj = ws[j] / ws.sum(axis=0)
            vals = f.density(X.reshape(-1, 1)).reshape(X.shape) * wj
            total += np.sum(vals * rw[:, None]) * (2 * np.pi / c.angles)
        return complex(total)

    if f.exactly_zero():
        return 0j, 0.0
    full = run(cfg)
    coarse = run(QuadratureConfig(panels=max(8, cfg.panels // 2), order=cfg.order, angles=max(16, cfg.angles // 2), log_range=cfg.log_range))
    return full, abs(full - coarse)


# Monte Carlo proposal: around an anchor, r = (t / (1 - t))^2 with t uniform and a uniform angle.


def _sample_around(rng: np.random.Generator, anchor: np.ndarray) -> np.ndarray:
    t = rng.random(anchor.shape)
    s = t / (1 - t)
    r = s * s
    th = rng.random(anchor.shape) * (2 * np.pi)
    return anchor + r * np.exp(1j * th)


def _proposal_density(x: np.ndarray, anchor: np.ndarray) -> np.ndarray:
    r = np.abs(x - anchor)
    s = np.sqrt(r)
    with np.errstate(divide="ignore", invalid="ignore"):
        d = 1.0 / ((1 + s) ** 2 * 2 * s * 2 * np.pi * r)
    return d


def _mc_block(f: Integrand, n: int, seed: np.random.SeedSequence) -> tuple[complex, float, int]:
    rng = np.random.default_rng(seed)
    V = f.n_vertices
    fixed = list(dict.fromkeys(complex(a) for a in f.anchors))
    X = np.empty((n, V), dtype=complex)
    q = np.ones(n)
    for v in range(V):
        anchors = [np.full(n, a) for a in fixed] + [X[:, w] for w in range(v)]
        k = rng.integers(0, len(anchors), n)
        A = np.choose(k, anchors) if len(anchors) < 32 else np.stack(anchors)[k, np.arange(n)]
        X[:, v] = _sample_around(rng, A)
        dens = sum(_proposal_density(X[:, v], a) for a in anchors) / len(anchors)
        q = q * dens
    good = np.isfinite(q) & (q > 0)
    for v in range(V):
        for a in fixed:
            good &= X[:, v] != a
        for w in range(v):
            good &= X[:, v] != X[:, w]
    vals = np.zeros(n, dtype=complex)
    if good.any():
        vals[good] = f.density(X[good]) / q[good]
    vals[~np.isfinite(vals)] = 0
    return complex(vals.sum()), float(np.sum(np.abs(vals - vals.mean()) ** 2)), n


def integrate_mc(f: Integrand, cfg: QuadratureConfig) -> tuple[complex, float, int]:
    """Mean and standard error over ``cfg.samples`` points in deterministic blocks."""
    if f.exactly_zero():
        return 0j, 0.0, 0
    n_blocks = max(1, math.ceil(cfg.samples / cfg.block))
    seeds = np.random.SeedSequence(cfg.seed).spawn(n_blocks)
    sizes = [min(cfg.block, cfg.samples - i * cfg.block) for i in range(n_blocks)]
    with ThreadPoolExecutor(cfg.n_threads()) as ex:
        parts = list(ex.map(lambda i: _mc_block(f, sizes[i], seeds[i]), range(n_blocks)))
    total = sum(p[2] for p in parts)
    mean = sum(p[0] for p in parts) / total
    # pooled variance from block sums of squared deviations plus between-block terms
    ss = 0.0
    for s, dev, n in parts:
        ss += dev + n * abs(s / n - mean) ** 2
    var = ss / max(total - 1, 1)
    return mean, math.sqrt(var / total), total


def integrate(f: Integrand, cfg: QuadratureConfig) -> tuple[complex, float, int]:
    scheme = cfg.scheme
    if scheme == "auto":
        scheme = "adaptive-2d" if f.n_vertices == 1 else "monte-carlo"
    if scheme == "adaptive-2d":
        if f.n_vertices != 1:
            raise ValueError("the product rule handles exactly one internal vertex")
        v, e = integrate_one_vertex(f, cfg)
        return v, e, 0
    return integrate_mc(f, cfg)


# ---------------------------------------------------------------------------
# Trees


def c_tree(n_forms: int) -> Fraction:
    """``(-2)^m / binom(m, m/2)`` for ``m`` d^c factors on an S-decorated tree."""
    if n_forms % 2:
        raise ValueError("an S-decorated tree has an even number of d^c factors")
    return Fraction((-2) ** n_forms, math.comb(n_forms, n_forms // 2))


def _endpoint(tree: PlanarTree, v: int, positions: Sequence[complex]) -> int | complex:
    return complex(positions[v]) if v < tree.n_legs else v - tree.n_legs


def tree_integrand(
    tree: PlanarTree,
    positions: Sequence[complex],
    g_position: int = 0,
    hol: complex = 1.0,
    antihol: complex = 1.0,
) -> tuple[Integrand, int]:
    """Integrand with the ``g_position``-th edge of the canonical order carrying ``G``.

    Returns the integrand and the sign ``(-1)^g_position`` of moving that edge to the front.
    """
    order = tree.canonical_orientation()
    edges = [tree.edges[i] for i in order]
    fe = [FormEdge(_endpoint(tree, a, positions), _endpoint(tree, b, positions)) for a, b in edges]
    g = fe[g_position]
    forms = fe[:g_position] + fe[g_position + 1 :]
    f = Integrand(len(tree.rotation) - tree.n_legs, forms, g, hol, antihol, anchors=[complex(p) for p in positions])
    return f, (-1) ** g_position


def canonical_rotation(positions: Sequence[complex]) -> tuple[complex, ...]:
    """Minimal rotation under the order ``(Re, Im)``; rotations of a word share it."""
    pts = tuple(complex(p) for p in positions)
    n = len(pts)
    rots = [pts[i:] + pts[:i] for i in range(n)]
    return min(rots, key=lambda r: [(p.real, p.imag) for p in r])


def tree_integral(
    tree: PlanarTree, positions: Sequence[complex], cfg: QuadratureConfig
) -> tuple[complex, float, int]:
    f, _ = tree_integrand(tree, positions)
    return integrate(f, cfg)


def correlator_tree(
    positions: Sequence[complex],
    cfg: QuadratureConfig = QuadratureConfig(),
    label: str = "",
    c_scale: Fraction | float | None = None,
) -> CorrelatorResult:
    """Correlator of a cyclic word of points: ``sum_T c_T * integral over C^{V_int}``.

    The word is evaluated at its canonical rotation, so every rotation gives the
    same number.  ``c_scale`` overrides the tree constant (used by calibration).

    >>> r = correlator_tree([1, 2])
    >>> r.value, r.pi_power
    (0j, 1)
    """
    pts = canonical_rotation(positions)
    n = len(pts)
    if n < 2:
        raise ValueError("a word needs at least two letters")
    if n == 2:
        if pts[0] == pts[1]:
            return CorrelatorResult(0j, 0.0, 1, label=label, flag="repeated-point")
        return CorrelatorResult(complex(math.log(abs(pts[0] - pts[1]))), 0.0, 1, label=label)
    m = 2 * (n - 2)
    c = float(c_tree(m)) if c_scale is None else float(c_scale)
    total, err2, samples = 0j, 0.0, 0
    for i, tree in enumerate(planar_trees(n)):
        sub = QuadratureConfig(**{**cfg.__dict__, "seed": cfg.seed + 7919 * i})
        v, e, s = tree_integral(tree, pts, sub)
        total += v
        err2 += e * e
        samples += s
    scale = c / TWO_PI_I ** (n - 2)
    return CorrelatorResult(total * scale, math.sqrt(err2) * abs(scale), n - 1, samples, label)


def calibrate_c3(z0: complex = 0.3 + 0.7j, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """Scalar ``c`` making ``c * I(0, 1, z0) / (2 pi i) = -L_2(z0)`` for the one-vertex integral."""
    r = correlator_tree([0, 1, z0], cfg, c_scale=1)
    target = -sv_polylog(2, z0)
    c = target / r.value
    if abs(c.imag) > 1e-6 * abs(c):
        raise ArithmeticError(f"calibration scalar is not real: {c}")
    return c.real


# ---------------------------------------------------------------------------
# One-loop graphs and the twistor line


def _graph_parts(g: CanonicalGraph | OrientedGraph) -> tuple[tuple[int, ...], tuple[tuple[int, int], ...]]:
    if isinstance(g, CanonicalGraph):
        return g.labels, g.edges
    return g.vertex_form()


def _loop_integrand(
    labels: Sequence[int],
    edges: Sequence[tuple[int, int]],
    positions: dict[int, complex] | Sequence[complex],
    hol: complex,
    antihol: complex,
) -> Integrand:
    internal = [v for v, c in enumerate(labels) if c == 0]
    idx = {v: i for i, v in enumerate(internal)}

    def pos(v: int) -> int | complex:
        if v in idx:
            return idx[v]
        lab = Label.from_code(labels[v])
        if lab.kind != "s":
            raise GraphError("only S-decorated legs are supported at genus 0")
        key = lab.index if isinstance(positions, dict) else lab.index - 1
        return complex(positions[key])

    forms = [FormEdge(pos(a), pos(b)) for a, b in edges]
    anchors = [p for p in (pos(v) for v in range(len(labels)) if v not in idx)]
    return Integrand(len(internal), forms, None, hol, antihol, anchors=anchors)


def correlator_one_loop(
    g: CanonicalGraph | OrientedGraph,
    positions: dict[int, complex] | Sequence[complex],
    cfg: QuadratureConfig = QuadratureConfig(),
) -> CorrelatorResult:
    """Monte Carlo value of the wedge of ``(1/2) d^c G`` over all edges, in the graph's edge order.

    ``positions`` maps the S-index of each leg label to a point.  The value is
    the coefficient of ``(2 pi i)^(-|E|)``.
    """
    labels, edges = _graph_parts(g)
    if loop_number(labels, edges) != 1:
        raise GraphError("expected a one-loop graph")
    if any(c and not is_s_code(c) for c in labels):
        raise GraphError("only S-decorated legs are supported at genus 0")
    label = str(g)
    E = len(edges)
    if zero_pattern(labels, edges) is not None:
        return CorrelatorResult(0j, 0.0, E, label=label, flag="zero-pattern", u=0.5 + 0j)
    f = _loop_integrand(labels, edges, positions, 1.0, 1.0)
    f.prefactor = 0.5**E
    v, e, s = integrate(f, cfg)
    return CorrelatorResult(v, e, E, s, label, u=0.5 + 0j)


def correlator_twistor(
    item: PlanarTree | CanonicalGraph | OrientedGraph,
    u: complex,
    positions: dict[int, complex] | Sequence[complex],
    cfg: QuadratureConfig = QuadratureConfig(),
) -> CorrelatorResult:
    """Fiber integral of the wedge of twistor propagators.

    Trees: the ``du`` coefficient, ``sum_e (-1)^e * integral of G_e times the
    other propagators``.  One-loop graphs: the top fiber-degree part with no
    ``du``.  Two or more loops: exactly 0, flagged ``degree-vanishing``.
    """
    u = complex(u)
    if isinstance(item, PlanarTree):
        n = item.n_legs
        pts = [complex(p) for p in positions]
        total, err2, samples = 0j, 0.0, 0
        for pos in range(len(item.edges)):
            f, sign = tree_integrand(item, pts, pos, u, 1 - u)
            sub = QuadratureConfig(**{**cfg.__dict__, "seed": cfg.seed + 104729 * pos})
            v, e, s = integrate(f, sub)
            total += sign * v
            err2 += e * e
            samples += s
        return CorrelatorResult(total, math.sqrt(err2), len(item.edges), samples, f"tree{n}", u, form="du")
    labels, edges = _graph_parts(item)
    E = len(edges)
    loops = loop_number(labels, edges)
    if loops >= 2:
        return CorrelatorResult(0j, 0.0, E, label=str(item), u=u, flag="degree-vanishing", form="top")
    if loops != 1:
        raise GraphError("twistor evaluation of graphs handles trees via PlanarTree and loops <= 1")
    if zero_pattern(labels, edges) is not None:
        return CorrelatorResult(0j, 0.0, E, label=str(item), u=u, flag="zero-pattern", form="top")
    f = _loop_integrand(labels, edges, positions, u, 1 - u)
    v, e, s = integrate(f, cfg)
    return CorrelatorResult(v, e, E, s, str(item), u, form="top")


# ---------------------------------------------------------------------------
# Maurer-Cartan spot checks on the base (z, u)

# Base coordinates are (Re z, Im z, u); forms are stored as component vectors with the tag included.


def _pullback_z(form, which: Literal["z", "w"]) -> np.ndarray:
    """Components along ``(Re z, Im z, u)`` of a propagator in which the moving point sits in slot ``which``."""
    rc = form.actual().real_components()
    if which == "z":
        return np.array([rc[0], rc[1], rc[4]])
    return np.array([rc[2], rc[3], rc[4]])


def _wedge2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Components ``(01, 02, 12)`` of ``a ^ b``."""
    return np.array([a[0] * b[1] - a[1] * b[0], a[0] * b[2] - a[2] * b[0], a[1] * b[2] - a[2] * b[1]])


def _exterior_derivative(f, base: np.ndarray, h: float) -> np.ndarray:
    """``d`` of a 1-form given as a function of base coordinates, by central differences."""
    n = len(base)
    J = np.zeros((n, n), dtype=complex)  # J[i, j] = d_i f_j
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        J[i] = (f(base + e) - f(base - e)) / (2 * h)
    return np.array([J[0, 1] - J[1, 0], J[0, 2] - J[2, 0], J[1, 2] - J[2, 1]])


def two_leg_form(base: np.ndarray, w: complex) -> np.ndarray:
    z = complex(base[0], base[1])
    return _pullback_z(twistor_propagator_p1(base[2], z, w), "z")


def star_form(base: np.ndarray, fixed: Sequence[complex], cfg: QuadratureConfig) -> np.ndarray:
    """Fiber integral of ``DG(x, a1) ^ DG(x, a2) ^ DG(x, z)`` as a 1-form on the base, fiber forms first."""
    a1, a2 = (complex(p) for p in fixed)
    z = complex(base[0], base[1])
    u = float(base[2])
    # components of each propagator in (dx, dxbar, dRe z, dIm z, du); the tag is included at the end
    out = np.zeros(3, dtype=complex)
    r, rw, th = _polar_rule(cfg)
    anchors = [a1, a2, z]
    for j, a in enumerate(anchors):
        X = (a + r[:, None] * np.exp(1j * th[None, :])).ravel()
        with np.errstate(divide="ignore"):
            ws = np.array([np.abs(X - b) ** -4.0 for b in anchors])
        wj = ws[j] / ws.sum(axis=0)
        rows = []
        for k, b in enumerate(anchors):
            d = X - b
            p, q = u * 0.5 / d, -(1 - u) * 0.5 / np.conj(d)
            G = np.log(np.abs(d))
            row = np.zeros((X.size, 5), dtype=complex)
            row[:, 0], row[:, 1] = p, q
            if k == 2:
                # the moving point is the second argument: coefficients -p dz, -q dzbar
                row[:, 2] = -(p + q)
                row[:, 3] = -1j * (p - q)
            row[:, 4] = G
            rows.append(row)
        M = np.stack(rows, axis=1)  # (N, 3 forms, 5 coords)
        for c in range(3):
            sub = M[:, :, [0, 1, 2 + c]]
            dens = np.linalg.det(sub) * (-2j)
            w = (rw[:, None] * np.ones((1, th.size))).ravel() * (2 * np.pi / cfg.angles)
            out[c] += np.sum(dens * wj * w)
    return out / TWO_PI_I**3


def star_boundary(base: np.ndarray, fixed: Sequence[complex]) -> np.ndarray:
    """``(1/2) sum_i (-1)^i DG(a_i, a_j) ^ DG(a_i, a_k)`` restricted to the base, ``j < k``."""
    a1, a2 = (complex(p) for p in fixed)
    z = complex(base[0], base[1])
    u = float(base[2])

    def prop(p, q, moving):
        f = twistor_propagator_p1(u, p, q)
        if moving is None:
            return np.array([0, 0, f.actual().coeff_du])
        return _pullback_z(f, moving)

    t1 = _wedge2(prop(a1, a2, None), prop(a1, z, "w"))
    t2 = _wedge2(prop(a2, a1, None), prop(a2, z, "w"))
    t3 = _wedge2(prop(z, a1, "z"), prop(z, a2, "z"))
    return 0.5 * (t1 - t2 + t3)


def mc_residual_component(
    component: Literal["two-leg", "three-star"],
    u: float,
    positions: Sequence[complex],
    cfg: QuadratureConfig = QuadratureConfig(),
    h: float = 1e-4,
) -> float:
    """Max-norm residual of the exterior-derivative relation on the base ``(z, u)``.

    ``two-leg``: ``positions = (z, w)``; ``d`` of the twistor propagator vanishes off the diagonal.
    ``three-star``: ``positions = (a1, a2, z)``; ``d`` of the star's fiber integral equals its
    boundary terms at ``x = a_i`` (genus 0 has no Casimir part).
    """
    if component == "two-leg":
        z, w = (complex(p) for p in positions)
        base = np.array([z.real, z.imag, float(u)])
        d = _exterior_derivative(lambda b: two_leg_form(b, w), base, h)
        return float(np.max(np.abs(d)))
    if component == "three-star":
        a1, a2, z = (complex(p) for p in positions)
        base = np.array([z.real, z.imag, float(u)])
        lhs = _exterior_derivative(lambda b: star_form(b, (a1, a2), cfg), base, h)
        rhs = star_boundary(base, (a1, a2))
        return float(np.max(np.abs(lhs - rhs)))
    raise ValueError(f"unsupported component {component!r}")

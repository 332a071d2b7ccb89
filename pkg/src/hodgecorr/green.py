"""Green functions and propagators on the projective line and on elliptic curves.

Values on the projective line are returned as the coefficient of ``1/(2 pi i)``;
``OneFormValue.pi_power`` records that tag and ``OneFormValue.actual`` multiplies
it in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np
from scipy.special import erfc, exp1

TWO_PI_I = 2j * math.pi

Mode = Literal["infty", "arakelov"]


def _is_infinite(z: complex | None) -> bool:
    return z is None or not np.isfinite(complex(z))


def green_p1(z: complex | None, w: complex | None, mode: Mode = "infty") -> float:
    """Green function on P^1 as the coefficient of ``1/(2 pi i)``.

    ``infty``: ``log|z - w|`` (normalization constant 0).
    ``arakelov``: ``log(|z - w| / sqrt((1 + |z|^2)(1 + |w|^2)))``; ``None`` or ``inf`` means the point at infinity.

    >>> green_p1(0, 1)
    0.0
    >>> round(green_p1(0, 1, "arakelov") + 0.5 * math.log(2), 15)
    0.0
    """
    if mode == "infty":
        if _is_infinite(z) or _is_infinite(w):
            raise ValueError("the infinity-normalized Green function is singular at infinity")
        d = abs(complex(z) - complex(w))
        if d == 0:
            raise ValueError("coincident points")
        return math.log(d)
    if mode == "arakelov":
        if _is_infinite(z) and _is_infinite(w):
            raise ValueError("coincident points")
        if _is_infinite(z):
            z, w = w, z
        z = complex(z)
        if _is_infinite(w):
            return -0.5 * math.log1p(abs(z) ** 2)
        w = complex(w)
        d = abs(z - w)
        if d == 0:
            raise ValueError("coincident points")
        return math.log(d) - 0.5 * (math.log1p(abs(z) ** 2) + math.log1p(abs(w) ** 2))
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class OneFormValue:
    """Components of a 1-form in ``dz, dzbar, dw, dwbar, du`` at one point.

    The stored numbers are coefficients of ``(2 pi i)^(-pi_power)``.
    """

    coeff_dz: complex = 0j
    coeff_dzbar: complex = 0j
    coeff_dwz: complex = 0j
    coeff_dwzbar: complex = 0j
    coeff_du: complex = 0j
    pi_power: int = 1

    def as_array(self) -> np.ndarray:
        return np.array([self.coeff_dz, self.coeff_dzbar, self.coeff_dwz, self.coeff_dwzbar, self.coeff_du])

    def actual(self) -> "OneFormValue":
        """The same form with the ``(2 pi i)`` tag multiplied in."""
        f = TWO_PI_I ** (-self.pi_power)
        a = self.as_array() * f
        return OneFormValue(*a, pi_power=0)

    def scaled(self, c: complex) -> "OneFormValue":
        return OneFormValue(*(self.as_array() * c), pi_power=self.pi_power)

    def spatial(self) -> "OneFormValue":
        return replace(self, coeff_du=0j)

    def real_components(self) -> np.ndarray:
        """Components along ``(Re z, Im z, Re w, Im w, u)`` for real ``u``.

        ``a dz + b dzbar = (a + b) dx + i (a - b) dy``.
        """
        a, b, c, d, e = self.as_array()
        return np.array([a + b, 1j * (a - b), c + d, 1j * (c - d), e])

    def is_close(self, other: "OneFormValue", tol: float = 1e-12) -> bool:
        if self.pi_power != other.pi_power:
            return bool(np.allclose(self.actual().as_array(), other.actual().as_array(), atol=tol, rtol=0))
        return bool(np.allclose(self.as_array(), other.as_array(), atol=tol, rtol=0))


def _check_distinct(z: complex, w: complex) -> complex:
    d = complex(z) - complex(w)
    if d == 0:
        raise ValueError("coincident points")
    return d


def dc_green_p1(z: complex, w: complex) -> OneFormValue:
    """``(d - dbar) G`` with ``G = log|z - w| / (2 pi i)`` in both variables.

    >>> dc_green_p1(1, 0).coeff_dz
    (0.5+0j)
    """
    d = _check_distinct(z, w)
    p, q = 0.5 / d, 0.5 / d.conjugate()
    return OneFormValue(p, -q, -p, q, 0j)


def twistor_propagator_p1(u: complex, z: complex, w: complex) -> OneFormValue:
    """``u dG - (1 - u) dbar G + du G`` on the twistor line."""
    d = _check_distinct(z, w)
    p, q = 0.5 / d, 0.5 / d.conjugate()
    u = complex(u)
    return OneFormValue(u * p, -(1 - u) * q, -u * p, (1 - u) * q, complex(math.log(abs(d))))


def conjugate_pullback(u: complex, z: complex, w: complex) -> OneFormValue:
    """Pull back the twistor propagator along ``u -> 1 - conj(u)`` and conjugate, tag included.

    The twistor propagator is real exactly when this equals ``twistor_propagator_p1(u, z, w).actual()``.
    """
    u = complex(u)
    f = twistor_propagator_p1(1 - u.conjugate(), z, w).actual()
    c = np.conjugate
    return OneFormValue(c(f.coeff_dzbar), c(f.coeff_dz), c(f.coeff_dwzbar), c(f.coeff_dwz), -c(f.coeff_du), pi_power=0)


def winding(w: complex, radius: float = 1e-3, n: int = 512) -> complex:
    """Integral of the ``z``-part of ``d^c G`` over a small circle around ``w`` (tag included).

    Periodic trapezoid rule; the exact answer is 1.
    """
    th = np.arange(n) * 2 * np.pi / n
    z = w + radius * np.exp(1j * th)
    dz = 1j * radius * np.exp(1j * th)
    d = z - w
    vals = (0.5 / d) * dz + (-0.5 / np.conj(d)) * np.conj(dz)
    return complex(vals.sum() * (2 * np.pi / n) / TWO_PI_I)


# ---------------------------------------------------------------------------
# Elliptic curves


@dataclass(frozen=True)
class LatticeCutoff:
    """Symmetric-disk cutoff ``0 < |gamma| <= radius``."""

    radius: float = 64.0

    def __post_init__(self) -> None:
        if not self.radius >= 2:
            raise ValueError("lattice cutoff radius must be >= 2")

    def doubled(self) -> "LatticeCutoff":
        return LatticeCutoff(2 * self.radius)


def _check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if not tau.imag > 0:
        raise ValueError("tau must lie in the upper half plane")
    return tau


def lattice_points(
    tau: complex,
    radius: float,
    center: tuple[float, float] = (0.0, 0.0),
    basis: np.ndarray | None = None,
    include_origin: bool = False,
) -> np.ndarray:
    """Real coordinates of lattice points in the closed disk of given radius about ``center``."""
    if basis is None:
        tau = _check_tau(tau)
        basis = np.array([[1.0, tau.real], [0.0, tau.imag]])
    inv = np.linalg.inv(basis)
    # coefficient box containing the disk
    span = np.abs(inv).sum(axis=1) * radius
    c = inv @ np.asarray(center, dtype=float)
    lo = np.floor(c - span).astype(int)
    hi = np.ceil(c + span).astype(int)
    m, n = np.meshgrid(np.arange(lo[0], hi[0] + 1), np.arange(lo[1], hi[1] + 1), indexing="ij")
    pts = (basis @ np.stack([m.ravel(), n.ravel()])).T
    r = np.hypot(pts[:, 0] - center[0], pts[:, 1] - center[1])
    keep = r <= radius
    if not include_origin:
        keep &= ~((m.ravel() == 0) & (n.ravel() == 0))
    return pts[keep]


def character(tau: complex, z: complex, gamma: complex) -> complex:
    """``exp(2 pi i Im(z conj(gamma)) / Im(tau))``."""
    tau = _check_tau(tau)
    return complex(np.exp(2j * np.pi * (complex(z) * complex(gamma).conjugate()).imag / tau.imag))


def _on_lattice(tau: complex, z: complex) -> bool:
    # coordinates of z in the basis (1, tau)
    b = complex(z).imag / tau.imag
    a = complex(z).real - b * tau.real
    return abs(a - round(a)) < 1e-14 and abs(b - round(b)) < 1e-14


def _cell_radius(tau: complex, scale: float = 1.0) -> float:
    return 0.5 * scale * max(abs(1 + tau), abs(1 - tau))


def green_elliptic(tau: complex, z: complex, cutoff: LatticeCutoff = LatticeCutoff()) -> tuple[float, float]:
    """``Im(tau)/pi * sum' chi_z(gamma) / |gamma|^2`` and a bound on the truncation error.

    The conditionally convergent sum is evaluated in its Gaussian-split form:
    a direct-lattice sum with weight ``exp(-a|gamma|^2)`` plus a dual-lattice
    sum of exponential integrals, both over symmetric disks.  Both pieces
    converge like Gaussians in the cutoff radius; their symmetric-disk
    partial sums agree with ``green_elliptic_partial`` in the limit.
    """
    tau = _check_tau(tau)
    z = complex(z)
    if _on_lattice(tau, z):
        raise ValueError("z lies on the lattice")
    area = tau.imag
    R = cutoff.radius
    alpha = math.pi / area
    basis = np.array([[1.0, tau.real], [0.0, area]])
    dual = np.linalg.inv(basis).T
    k = np.array([z.imag, -z.real]) / area

    pts = lattice_points(tau, R, basis=basis)
    r2 = (pts**2).sum(axis=1)
    phase = 2 * np.pi * (pts @ k)
    far = math.fsum(np.cos(phase) * np.exp(-alpha * r2) / r2)

    Rd = R / area
    lam = lattice_points(tau, Rd, center=(k[0], k[1]), basis=dual, include_origin=True)
    d2 = ((lam - k) ** 2).sum(axis=1)
    beta = math.pi**2 / alpha
    near = (math.pi / area) * math.fsum(exp1(beta * d2)) - alpha

    value = area / math.pi * (far + near)

    # integral comparison of both tails, one lattice cell per point
    h = _cell_radius(tau)
    s0 = max(R - 2 * h, 1e-300)
    tail_far = (2 * math.pi / area) / s0**2 * (
        math.exp(-alpha * s0**2) / (2 * alpha) + h * math.sqrt(math.pi / alpha) / 2 * erfc(math.sqrt(alpha) * s0)
    )
    f1, f2 = dual[:, 0], dual[:, 1]
    hd = 0.5 * max(np.linalg.norm(f1 + f2), np.linalg.norm(f1 - f2))
    t0 = max(Rd - 2 * hd, 1e-300)
    tail_near = (math.pi / area) * (2 * math.pi * area) / (beta * t0**2) * (
        math.exp(-beta * t0**2) / (2 * beta) + hd * math.sqrt(math.pi / beta) / 2 * erfc(math.sqrt(beta) * t0)
    )
    tail = area / math.pi * (tail_far + tail_near)
    return value, tail


def green_elliptic_partial(tau: complex, z: complex, radius: float) -> float:
    """Plain symmetric-disk partial sum ``Im(tau)/pi * sum_{0<|gamma|<=R} chi_z(gamma)/|gamma|^2``.

    Converges slowly (boundary fluctuations of order ``R^(-3/2)``); used as an
    independent route to ``green_elliptic``.
    """
    tau = _check_tau(tau)
    z = complex(z)
    if _on_lattice(tau, z):
        raise ValueError("z lies on the lattice")
    pts = lattice_points(tau, radius)
    k = np.array([z.imag, -z.real]) / tau.imag
    r2 = (pts**2).sum(axis=1)
    return tau.imag / math.pi * math.fsum(np.cos(2 * np.pi * (pts @ k)) / r2)


def eisenstein_kronecker_tail(tau: complex, n: int, radius: float) -> float:
    """Bound on ``sum_{|gamma| > R} |gamma|^(-2n-2)`` by comparison with an integral over lattice cells."""
    tau = _check_tau(tau)
    h = _cell_radius(tau)
    s0 = radius - 2 * h
    if s0 <= 0:
        return math.inf
    area = tau.imag
    return (2 * math.pi / area) * (s0 ** (-2 * n) / (2 * n) + h * s0 ** (-2 * n - 1) / (2 * n + 1))


def eisenstein_kronecker(tau: complex, a: complex, n: int, cutoff: LatticeCutoff = LatticeCutoff()) -> tuple[complex, float]:
    """``sum' chi_a(gamma) / |gamma|^(2n+2)`` over ``0 < |gamma| <= R`` and its tail bound.

    >>> v, t = eisenstein_kronecker(1j, 0, 1, LatticeCutoff(32))
    >>> abs(v.imag) < 1e-15 and t < 1e-2
    True
    """
    if n < 1:
        raise ValueError("n must be >= 1 (n = 0 is only conditionally convergent)")
    tau = _check_tau(tau)
    a = complex(a)
    pts = lattice_points(tau, cutoff.radius)
    k = np.array([a.imag, -a.real]) / tau.imag
    r2 = (pts**2).sum(axis=1)
    phase = 2 * np.pi * (pts @ k)
    w = r2 ** (-(n + 1))
    val = complex(math.fsum(np.cos(phase) * w), math.fsum(np.sin(phase) * w))
    return val, eisenstein_kronecker_tail(tau, n, cutoff.radius)

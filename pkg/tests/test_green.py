import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodgecorr.green import (
    LatticeCutoff,
    OneFormValue,
    character,
    conjugate_pullback,
    dc_green_p1,
    eisenstein_kronecker,
    eisenstein_kronecker_tail,
    green_elliptic,
    green_elliptic_partial,
    green_p1,
    lattice_points,
    twistor_propagator_p1,
    winding,
)

coords = st.floats(-3, 3, allow_nan=False)
points = st.builds(complex, coords, coords)
taus = st.builds(complex, st.floats(-0.5, 0.5), st.floats(0.7, 2.0))


def theta_oracle(tau, z):
    """Kronecker limit formula: -log|theta_1(z)/eta|^2 + 2 pi (Im z)^2 / Im tau."""
    q = mp.exp(1j * mp.pi * tau)
    th = mp.jtheta(1, mp.pi * z, q)
    eta = mp.exp(1j * mp.pi * tau / 12) * mp.qp(mp.exp(2j * mp.pi * tau))
    return float(-mp.log(abs(th / eta) ** 2) + 2 * mp.pi * mp.im(z) ** 2 / mp.im(tau))


def test_p1_values():
    assert green_p1(0, 1) == 0.0
    assert green_p1(0, 1, "arakelov") == pytest.approx(-0.5 * math.log(2), abs=1e-15)
    assert green_p1(2, None, "arakelov") == pytest.approx(-0.5 * math.log(5))
    with pytest.raises(ValueError):
        green_p1(1, 1)
    with pytest.raises(ValueError):
        green_p1(None, 0)


@settings(max_examples=100)
@given(z=points, w=points, mode=st.sampled_from(["infty", "arakelov"]))
def test_p1_symmetric(z, w, mode):
    if abs(z - w) < 1e-6:
        return
    assert green_p1(z, w, mode) == pytest.approx(green_p1(w, z, mode), abs=1e-14)


def test_dc_green_coefficients():
    f = dc_green_p1(3 + 1j, 1j)
    assert f.coeff_dz == pytest.approx(0.5 / 3)
    assert f.coeff_dzbar == pytest.approx(-0.5 / 3)


@settings(max_examples=50)
@given(z=points, w=points)
def test_dc_green_swap(z, w):
    if abs(z - w) < 1e-3:
        return
    a, b = dc_green_p1(z, w), dc_green_p1(w, z)
    assert a.coeff_dz == pytest.approx(b.coeff_dwz)
    assert a.coeff_dzbar == pytest.approx(b.coeff_dwzbar)


def closedness_residual(z, w, h=1e-5):
    """d of the z-part of d^c G in (x, y): the mixed partials of the real components must agree."""

    def comps(p):
        a, b, *_ = dc_green_p1(p, w).real_components()
        return np.array([a, b])

    dy_of_x = (comps(z + 1j * h)[0] - comps(z - 1j * h)[0]) / (2 * h)
    dx_of_y = (comps(z + h)[1] - comps(z - h)[1]) / (2 * h)
    return abs(dx_of_y - dy_of_x)


@settings(max_examples=50)
@given(z=points, w=points)
def test_dc_green_closed_off_diagonal(z, w):
    if abs(z - w) < 0.1:
        return
    assert closedness_residual(z, w) < 1e-6


@pytest.mark.parametrize("w", [0, 1 + 1j, -2.5 + 0.3j])
def test_winding_number_one(w):
    assert abs(winding(w) - 1) < 1e-4


def test_twistor_at_half_is_half_dc():
    z, w = 0.7 - 0.2j, 1.5j
    t = twistor_propagator_p1(0.5, z, w).spatial()
    assert t.is_close(dc_green_p1(z, w).scaled(0.5))
    assert twistor_propagator_p1(0.3, z, w).coeff_du == pytest.approx(green_p1(z, w))


@settings(max_examples=60)
@given(u=st.builds(complex, st.floats(-1, 2), st.floats(-1, 1)), z=points, w=points)
def test_twistor_reality(u, z, w):
    if abs(z - w) < 1e-3:
        return
    assert conjugate_pullback(u, z, w).is_close(twistor_propagator_p1(u, z, w).actual(), 1e-9)


def test_twistor_endpoints():
    z, w = 1 + 1j, -0.5
    hol = twistor_propagator_p1(1, z, w)
    anti = twistor_propagator_p1(0, z, w)
    assert hol.coeff_dzbar == 0 and hol.coeff_dwzbar == 0
    assert anti.coeff_dz == 0 and anti.coeff_dwz == 0


def test_one_form_actual_tag():
    f = OneFormValue(1, 0, 0, 0, 0, pi_power=1).actual()
    assert f.coeff_dz == pytest.approx(1 / (2j * math.pi))


# ---------------------------------------------------------------------------
# Elliptic


@pytest.mark.parametrize(
    "tau, z",
    [(1j, (1 + 1j) / 2), (0.2 + 1.3j, 0.4 - 0.7j), (-0.5 + 0.9j, 0.1 + 0.2j), (1j, 0.25), (2j, 0.5 + 0.5j)],
)
def test_elliptic_matches_theta(tau, z):
    v, tail = green_elliptic(tau, z)
    assert v == pytest.approx(theta_oracle(tau, z), abs=1e-12)
    assert tail < 1e-12


def test_elliptic_half_period_value():
    assert green_elliptic(1j, (1 + 1j) / 2)[0] == pytest.approx(-math.log(2), abs=1e-13)


@settings(max_examples=40, deadline=None)
@given(tau=taus, z=points, radius=st.sampled_from([8.0, 16.0, 64.0]))
def test_elliptic_even_exactly(tau, z, radius):
    try:
        v, _ = green_elliptic(tau, z, LatticeCutoff(radius))
    except ValueError:
        return
    assert v == green_elliptic(tau, -z, LatticeCutoff(radius))[0]


@settings(max_examples=20, deadline=None)
@given(tau=taus, z=points)
def test_elliptic_periodic(tau, z):
    try:
        v = green_elliptic(tau, z)[0]
    except ValueError:
        return
    assert green_elliptic(tau, z + 1)[0] == pytest.approx(v, abs=1e-9)
    assert green_elliptic(tau, z + tau)[0] == pytest.approx(v, abs=1e-9)


def test_partial_sums_approach_split_form():
    tau, z = 1j, 0.2 + 0.35j
    exact = green_elliptic(tau, z)[0]
    # the plain disk sum converges slowly with boundary fluctuations
    errs = [abs(green_elliptic_partial(tau, z, r) - exact) for r in (32, 128, 256)]
    assert errs[-1] < 5e-3
    assert max(errs[1:]) < errs[0] + 1e-3


def test_lattice_rejected():
    with pytest.raises(ValueError):
        green_elliptic(1j, 1 + 1j)
    with pytest.raises(ValueError):
        green_elliptic(-1j, 0.5)
    with pytest.raises(ValueError):
        LatticeCutoff(1)


@settings(max_examples=60)
@given(
    z=points,
    a=st.tuples(st.integers(-5, 5), st.integers(-5, 5)),
    b=st.tuples(st.integers(-5, 5), st.integers(-5, 5)),
    tau=taus,
)
def test_character_is_multiplicative(z, a, b, tau):
    g1 = a[0] + a[1] * tau
    g2 = b[0] + b[1] * tau
    assert character(tau, z, g1 + g2) == pytest.approx(character(tau, z, g1) * character(tau, z, g2), abs=1e-9)
    assert abs(character(tau, z, g1)) == pytest.approx(1)


def test_lattice_points_symmetric():
    pts = lattice_points(0.3 + 1.1j, 10)
    s = {(round(x, 9), round(y, 9)) for x, y in pts}
    assert all((round(-x, 9) + 0.0, round(-y, 9) + 0.0) in s for x, y in s)
    assert (0.0, 0.0) not in s


def ek_direct(tau, a, n, R):
    total = 0j
    M = int(R / min(1, tau.imag)) + 2
    for m in range(-M, M + 1):
        for k in range(-M, M + 1):
            g = m + k * tau
            if g == 0 or abs(g) > R:
                continue
            total += character(tau, a, g) / abs(g) ** (2 * n + 2)
    return total


@pytest.mark.parametrize("n", [1, 2, 3])
def test_eisenstein_kronecker_direct(n):
    v, tail = eisenstein_kronecker(1j, 0, n, LatticeCutoff(16))
    direct = ek_direct(1j, 0, n, 32)
    assert abs(v.imag) < 1e-15
    assert abs(v - direct) <= tail


@pytest.mark.parametrize("tau, a", [(1j, 0.3 + 0.1j), (0.1 + 1.2j, -0.4 + 0.6j)])
def test_eisenstein_kronecker_conjugation_and_doubling(tau, a):
    for n in (1, 2):
        v, tail = eisenstein_kronecker(tau, a, n, LatticeCutoff(16))
        vm, _ = eisenstein_kronecker(tau, -a, n, LatticeCutoff(16))
        assert vm == pytest.approx(v.conjugate(), abs=1e-14)
        v2, tail2 = eisenstein_kronecker(tau, a, n, LatticeCutoff(32))
        assert abs(v - v2) <= tail and tail2 < tail


def test_eisenstein_kronecker_known_value():
    # sum' |m + n i|^-4 = 4 zeta(2) beta(2) with beta the Dirichlet beta (Catalan's constant at 2)
    v, tail = eisenstein_kronecker(1j, 0, 1, LatticeCutoff(256))
    assert abs(v.real - 4 * float(mp.zeta(2) * mp.catalan)) <= tail


def test_eisenstein_kronecker_rejects_n0():
    with pytest.raises(ValueError):
        eisenstein_kronecker(1j, 0, 0)
    assert eisenstein_kronecker_tail(1j, 1, 1.0) == math.inf


import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hodgecorr.correlator import bloch_wigner, levin_coefficient, levin_polylog, sv_polylog

coords = st.floats(-4, 4, allow_nan=False)
points = st.builds(complex, coords, coords).filter(lambda z: abs(z) > 1e-3 and abs(z - 1) > 1e-3)


def ramakrishnan_d2(z):
    """Bloch-Wigner function from the Ramakrishnan form, evaluated at 30 digits."""
    with mp.workdps(30):
        z = mp.mpc(z)
        lg = mp.log(abs(z))
        return float(mp.im(mp.polylog(2, z) - lg * mp.polylog(1, z)))


def zagier_l3_real(x):
    """``Re(Li_3 - log|x| Li_2 + log^2|x| Li_1 / 3)``; real parts do not depend on the branch side."""
    with mp.workdps(30):
        x = mp.mpf(x)
        lg = mp.log(abs(x))
        s = mp.polylog(3, x) - lg * mp.polylog(2, x) + lg**2 * mp.polylog(1, x) / 3
        return float(mp.re(s))


def test_catalan_value():
    assert sv_polylog(2, 1j) == pytest.approx(1j * float(mp.catalan), abs=1e-15)


def test_zeta_value_at_minus_one():
    assert sv_polylog(3, -1) == pytest.approx(-0.75 * float(mp.zeta(3)), abs=1e-15)


@settings(max_examples=100)
@given(z=points)
def test_l1_is_minus_log(z):
    assert sv_polylog(1, z).real == pytest.approx(-math.log(abs(1 - z)), abs=1e-12)
    assert sv_polylog(1, z).imag == 0


@settings(max_examples=100)
@given(z=points)
def test_l2_is_bloch_wigner(z):
    assert sv_polylog(2, z) == pytest.approx(1j * bloch_wigner(z), abs=1e-12)
    assert bloch_wigner(z) == pytest.approx(ramakrishnan_d2(z), abs=1e-12)


@settings(max_examples=60)
@given(z=points, n=st.integers(2, 5))
def test_inversion_and_conjugation(z, n):
    v = sv_polylog(n, z)
    assert sv_polylog(n, 1 / z) == pytest.approx((-1) ** (n - 1) * v, abs=1e-10)
    assert sv_polylog(n, z.conjugate()) == pytest.approx((-1) ** (n - 1) * v, abs=1e-10)
    # odd weight is real, even weight is imaginary
    assert (v.imag if n % 2 else v.real) == 0


@settings(max_examples=60)
@given(x=points, y=points)
def test_five_term_relation(x, y):
    assume(abs(1 - x * y) > 1e-2 and min(abs(x - 1), abs(y - 1), abs(x), abs(y)) > 1e-2)
    args = [x, y, (1 - x) / (1 - x * y), 1 - x * y, (1 - y) / (1 - x * y)]
    assume(all(abs(a) > 1e-2 and abs(a - 1) > 1e-2 for a in args))
    assert abs(sum(bloch_wigner(a) for a in args)) < 1e-9


@pytest.mark.parametrize("x", [2.0, 3.5, -0.5])
def test_real_axis_weight_three(x):
    assert sv_polylog(3, x).real == pytest.approx(zagier_l3_real(x), abs=1e-12)


@pytest.mark.parametrize(
    "n, k, expected",
    [(2, 0, Fraction(1)), (3, 0, Fraction(1)), (3, 1, Fraction(1, 3)), (4, 2, Fraction(1, 15)), (4, 0, Fraction(1))],
)
def test_levin_coefficients(n, k, expected):
    # frozen hand evaluations of 2^k (n-2)! (2n-k-3)! / ((2n-3)! (k+1)! (n-k-2)!)
    assert levin_coefficient(n, k) == expected


def test_levin_weight_three_at_two():
    # only k = 0 contributes at weight 3, so the value is the real-axis L_3
    assert levin_polylog(3, 2) == pytest.approx(zagier_l3_real(2.0), abs=1e-12)


def test_levin_weight_four_transcription():
    z = 0.4 + 1.3j
    lg = math.log(abs(z))
    expected = sv_polylog(4, z) + sv_polylog(2, z) * lg**2 / 15
    assert levin_polylog(4, z) == pytest.approx(expected, abs=1e-13)


@settings(max_examples=50)
@given(theta=st.floats(0.01, 6.27), n=st.integers(2, 6))
def test_levin_equals_sv_on_unit_circle(theta, n):
    z = complex(math.cos(theta), math.sin(theta))
    assume(abs(z - 1) > 1e-3)
    assert levin_polylog(n, z) == pytest.approx(sv_polylog(n, z), abs=1e-12)


@pytest.mark.parametrize("z", [0, 1, 1 + 0j])
def test_singular_points(z):
    with pytest.raises(ValueError):
        sv_polylog(2, z)


def test_bad_weights():
    with pytest.raises(ValueError):
        sv_polylog(0, 2)
    with pytest.raises(ValueError):
        levin_polylog(1, 2)

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from outcoupling import specfun
from outcoupling.errors import DomainError, PoleError

EULER = 0.57721566490153286061


def brute_odd_sum(z, sign, terms=1_000_000):
    """sum over odd m of 1/(z^2 + sign m^2), partial sum plus the first two tail terms."""
    m = np.arange(1, 2 * terms, 2, dtype=float)
    partial = np.sum(1.0 / (z * z + sign * m * m))
    top = 2.0 * terms  # midpoint of the first omitted gap
    # sum over odd m > top of 1/m^2 and 1/m^4, by the integral rule
    tail2 = 1.0 / (2.0 * top)
    tail4 = 1.0 / (6.0 * top**3)
    return partial + sign * tail2 - z * z * tail4


def brute_ho_sum(z, terms=2_000_000):
    """sum_m w_m/(z + m), direct partial sum plus an asymptotic tail."""
    m = np.arange(terms, dtype=float)
    log_w = np.array([math.lgamma(2 * k + 1) - 2 * k * math.log(2) - 2 * math.lgamma(k + 1) for k in range(terms)])
    partial = np.sum(np.exp(log_w) / math.sqrt(math.pi) / (z + m))
    # w_m ~ (1 - 1/(8m))/(pi sqrt m); integrate from terms - 1/2
    s = terms - 0.5
    tail = (2.0 / math.sqrt(s) - (2.0 * z + 0.25) * 2.0 / (3.0 * s**1.5)) / math.pi
    return partial + tail


def sample_points(count=20, seed=7):
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < count:
        z = rng.uniform(0.0, 5.0)
        if min(abs(z - odd) for odd in (1, 3, 5)) > 0.05:
            pts.append(z)
    return pts


@pytest.mark.parametrize("x,expected", [(1.0, 0.0), (0.5, 0.5723649429247001), (5.0, math.log(24.0))])
def test_ln_gamma_known_values(x, expected):
    assert specfun.ln_gamma(x) == pytest.approx(expected, rel=1e-12, abs=1e-14)


def test_ln_gamma_against_stdlib():
    xs = np.geomspace(0.1, 200.0, 400)
    ours = specfun.ln_gamma(xs)
    ref = np.array([math.lgamma(x) for x in xs])
    assert np.allclose(ours, ref, rtol=1e-12, atol=1e-13)


def test_ln_gamma_rejects_nonpositive():
    with pytest.raises(DomainError):
        specfun.ln_gamma(0.0)
    with pytest.raises(DomainError):
        specfun.ln_gamma(-1.5)


def test_recip_gamma_values_and_zeros():
    assert specfun.recip_gamma(1.0) == pytest.approx(1.0, rel=1e-14)
    for pole in (0.0, -1.0, -2.0, -7.0):
        assert specfun.recip_gamma(pole) == 0.0
    assert specfun.recip_gamma(-0.5) == pytest.approx(-0.28209479177387814, rel=1e-12)


def test_recip_gamma_negative_axis_against_stdlib():
    xs = np.array([-4.3, -3.5, -2.9, -1.25, -0.75, -0.1, 0.3, 2.5, 11.0])
    ref = np.array([1.0 / math.gamma(x) for x in xs])
    assert np.allclose(specfun.recip_gamma(xs), ref, rtol=1e-11)


@given(st.floats(min_value=1e-3, max_value=50.0))
def test_recip_gamma_times_gamma_is_one(x):
    assert specfun.recip_gamma(x) * math.exp(specfun.ln_gamma(x)) == pytest.approx(1.0, rel=1e-10)


@pytest.mark.parametrize(
    "x,expected",
    [(1.0, -EULER), (0.5, -EULER - 2 * math.log(2.0)), (2.0, 1.0 - EULER)],
)
def test_digamma_known_values(x, expected):
    assert specfun.digamma(x) == pytest.approx(expected, rel=1e-12)


def test_digamma_series_oracle():
    # psi(x) = -gamma + sum_{k>=0} [1/(k+1) - 1/(k+x)], tail by Euler-Maclaurin
    def series(x, terms=200_000):
        k = np.arange(terms, dtype=float)
        s = np.sum(1.0 / (k + 1.0) - 1.0 / (k + x))
        n = float(terms)
        # remaining sum ~ (x - 1)/n - (x - 1)(x)/ (2 n^2)
        return -EULER + s + (x - 1.0) / n - (x - 1.0) * x / (2.0 * n * n)

    for x in (0.1, 0.37, 1.9, 7.25, 40.0):
        assert specfun.digamma(x) == pytest.approx(series(x), rel=1e-9, abs=1e-10)


def test_digamma_rejects_nonpositive():
    with pytest.raises(DomainError):
        specfun.digamma(0.0)


def test_odd_sum_tan_examples():
    assert specfun.odd_sum_tan(0.0) == pytest.approx(-math.pi**2 / 8, rel=1e-14)
    assert specfun.odd_sum_tan(0.5) == pytest.approx(-math.pi / 2, rel=1e-13)
    assert specfun.odd_sum_tan(2.0) == pytest.approx(0.0, abs=1e-14)


def test_odd_sum_tan_pole():
    with pytest.raises(PoleError):
        specfun.odd_sum_tan(3.0)


def test_odd_sum_tanh_examples():
    assert specfun.odd_sum_tanh(0.0) == pytest.approx(math.pi**2 / 8, rel=1e-14)
    assert specfun.odd_sum_tanh(1.0) == pytest.approx(math.pi / 4 * math.tanh(math.pi / 2), rel=1e-13)
    assert specfun.odd_sum_tanh(10.0) == pytest.approx(math.pi / 40, rel=1e-6)


def test_odd_sums_small_argument_branch_is_continuous():
    for z in (9.9e-5, 1.01e-4):
        assert specfun.odd_sum_tan(z) == pytest.approx(-math.pi / 4 * math.tan(math.pi * z / 2) / z, rel=1e-12)
        assert specfun.odd_sum_tanh(z) == pytest.approx(math.pi / 4 * math.tanh(math.pi * z / 2) / z, rel=1e-12)


def test_odd_sums_against_brute_force():
    for z in sample_points():
        assert abs(specfun.odd_sum_tan(z) - brute_odd_sum(z, -1.0)) <= 1e-8
        assert abs(specfun.odd_sum_tanh(z) - brute_odd_sum(z, +1.0)) <= 1e-8


@pytest.mark.parametrize("m,expected", [(0, 1 / math.sqrt(math.pi)), (1, 0.5 / math.sqrt(math.pi)), (5, 63 / 256 / math.sqrt(math.pi))])
def test_ho_weight_examples(m, expected):
    assert specfun.ho_weight(m) == pytest.approx(expected, rel=1e-14)


def test_ho_weight_factorial_identity():
    for m in range(21):
        scaled = specfun.ho_weight(m) * math.sqrt(math.pi) * 4**m * math.factorial(m) ** 2 / math.factorial(2 * m)
        assert scaled == pytest.approx(1.0, rel=1e-12)


def test_ho_weights_strictly_decrease():
    w = specfun.ho_weights(200)
    assert np.all(np.diff(w) < 0)
    assert w[0] == pytest.approx(specfun.ho_weight(0))


@pytest.mark.parametrize("z,expected", [(0.25, 2.958675119), (1.0, 2 / math.sqrt(math.pi)), (10.0, math.exp(math.lgamma(10.0) - math.lgamma(10.5)))])
def test_ho_sum_examples(z, expected):
    assert specfun.ho_sum(z) == pytest.approx(expected, rel=1e-5)


@pytest.mark.parametrize("z", [0.25, 0.75, 1.3, 10.0])
def test_ho_sum_against_brute_force(z):
    assert specfun.ho_sum(z) == pytest.approx(brute_ho_sum(z), rel=1e-6)


def test_ho_sum_rejects_nonpositive():
    with pytest.raises(DomainError):
        specfun.ho_sum(0.0)


@settings(max_examples=60)
@given(st.floats(min_value=1e-3, max_value=100.0), st.floats(min_value=1e-3, max_value=100.0))
def test_gamma_ratio_matches_log_difference(a, b):
    expected = math.exp(math.lgamma(a) - math.lgamma(b))
    assert specfun.gamma_ratio(a, b) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize(
    "a,b",
    [(10.0, 10.5), (1e3, 1e3 + 0.5), (1e6, 1e6 + 1.0), (1e10, 1e10 + 0.5), (12.3, 57.1), (3.0, 11.0), (0.3, 0.8)],
)
def test_gamma_ratio_large_arguments(a, b):
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30
    expected = float(mpmath.exp(mpmath.loggamma(a) - mpmath.loggamma(b)))
    assert specfun.gamma_ratio(a, b) == pytest.approx(expected, rel=1e-13)
    assert specfun.ln_gamma_diff(a, b) == pytest.approx(float(mpmath.loggamma(a) - mpmath.loggamma(b)), abs=1e-13)

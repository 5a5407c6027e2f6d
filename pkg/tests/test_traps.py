import math

import numpy as np
import pytest
from scipy import integrate
from hypothesis import given
from hypothesis import strategies as st

from outcoupling import specfun, traps
from outcoupling.errors import DomainError

BOX = traps.TrapModel("box", 1.0)
HO = traps.TrapModel("harmonic", 1.0)


def box_series(y, power=1, terms=200_000):
    """sum over odd n of 2/(n^2 pi^2 + y)^power with an integral tail."""
    n = np.arange(1, 2 * terms, 2, dtype=float)
    s = np.sum(2.0 / (n * n * math.pi**2 + y) ** power)
    top = 2.0 * terms
    # sum over odd n > top of 2/(pi n)^(2p) ~ integral/2
    tail = 2.0 / math.pi ** (2 * power) / (2.0 * (2 * power - 1) * top ** (2 * power - 1))
    return s + tail


def ho_series(y, power=1, terms=400_000):
    """sum_m w_m/(y + 2m + 1/2)^power with an asymptotic tail."""
    w = specfun.ho_weights(terms)
    m = np.arange(terms, dtype=float)
    s = np.sum(w / (y + 2 * m + 0.5) ** power)
    # w_m ~ (1 - 1/(8m))/(pi sqrt m) beyond the partial sum
    top = terms - 0.5

    def mapped(u):
        m = top / (u * u)
        return (1 - 1 / (8 * m)) / (math.pi * math.sqrt(m)) / (y + 2 * m + 0.5) ** power * 2 * top / u**3

    tail = integrate.quad(mapped, 0.0, 1.0, epsabs=1e-15, epsrel=1e-12)[0]
    return s + tail


def test_model_invariants():
    assert BOX.dispersion == 1.0 and HO.dispersion == 0.5
    assert traps.TrapModel("box", 3.0).lam == 3.0
    assert traps.TrapModel("harmonic", 3.0).lam == 6.0
    assert HO.time_from_tau(10.0) == 5.0 and HO.tau_from_time(5.0) == 10.0
    assert BOX.time_from_tau(10.0) == 10.0


@pytest.mark.parametrize("coupling", [0.0, -1.0, float("nan"), float("inf")])
def test_model_rejects_bad_coupling(coupling):
    with pytest.raises(DomainError):
        traps.TrapModel("box", coupling)


def test_model_rejects_unknown_kind():
    with pytest.raises(DomainError):
        traps.TrapModel("ring", 1.0)


def test_coupled_levels_examples():
    box = traps.coupled_levels(BOX, 3)
    assert [lv.n for lv in box] == [1, 3, 5]
    assert [lv.energy for lv in box] == pytest.approx([math.pi**2, 9 * math.pi**2, 25 * math.pi**2])
    assert all(lv.weight == 2.0 for lv in box)
    ho = traps.coupled_levels(HO, 2)
    assert [lv.n for lv in ho] == [0, 2]
    assert [lv.energy for lv in ho] == [0.5, 2.5]
    assert [lv.weight for lv in ho] == pytest.approx([1 / math.sqrt(math.pi), 0.5 / math.sqrt(math.pi)])
    assert traps.coupled_levels(BOX, 11)[-1].n == 21


@pytest.mark.parametrize("trap", [BOX, HO])
def test_coupled_levels_ordering(trap):
    levels = traps.coupled_levels(trap, 40)
    energies = np.array([lv.energy for lv in levels])
    weights = np.array([lv.weight for lv in levels])
    assert np.all(np.diff(energies) > 0)
    assert np.all(weights > 0)
    if trap.kind == "harmonic":
        assert np.all(np.diff(weights) < 0)
    assert all(lv.n % 2 == (1 if trap.kind == "box" else 0) for lv in levels)


def test_big_f_at_origin():
    assert traps.big_f(BOX, 0.0) == pytest.approx(0.25, rel=1e-15)
    assert traps.big_f(HO, 0.0) == pytest.approx(0.5 * math.gamma(0.25) / math.gamma(0.75), rel=1e-12)
    assert traps.big_f_prime(BOX, 0.0) == pytest.approx(-1.0 / 48.0, rel=1e-12)


Y_SAMPLES = [0.0, 1e-3, 0.009, 0.011, 0.3, 1.0, 4.0, 9.0, 30.0, 100.0, 400.0, 5000.0]


@pytest.mark.parametrize("y", Y_SAMPLES)
def test_box_closed_forms_match_series(y):
    assert traps.big_f(BOX, y) == pytest.approx(box_series(y), rel=1e-8)
    assert traps.big_f_prime(BOX, y) == pytest.approx(-box_series(y, 2), rel=1e-8)


@pytest.mark.parametrize("y", Y_SAMPLES[::2])
def test_harmonic_closed_forms_match_series(y):
    assert traps.big_f(HO, y) == pytest.approx(ho_series(y), rel=1e-6)
    assert traps.big_f_prime(HO, y) == pytest.approx(-ho_series(y, 2), rel=1e-6)


@pytest.mark.parametrize("trap", [BOX, HO])
def test_big_f_decreasing_and_vanishing(trap):
    y = np.concatenate(([0.0], np.geomspace(1e-6, 1e8, 300)))
    f = traps.big_f(trap, y)
    assert np.all(np.diff(f) < 0)
    assert f[-1] < 1e-3 * f[0]
    assert np.all(traps.big_f_prime(trap, y) < 0)


def test_big_f_rejects_negative():
    with pytest.raises(DomainError):
        traps.big_f(BOX, -1.0)
    with pytest.raises(DomainError):
        traps.big_f_prime(HO, -1.0)


def test_big_f_cont_box():
    assert traps.big_f_cont(BOX, 2 * math.pi) == pytest.approx(0.0, abs=1e-15)
    assert traps.big_f_cont(BOX, math.pi) == math.inf
    assert traps.big_f_cont(BOX, math.pi - 1e-9) > 1e6
    assert traps.big_f_cont(BOX, math.pi + 1e-9) < -1e6
    for k in (0.3, 1.0, 2.5, 5.0, 11.0):
        # F(-k^2) from the series with y -> -k^2, away from the poles
        assert traps.big_f_cont(BOX, k) == pytest.approx(box_series(-k * k), rel=1e-7)


def test_big_f_cont_harmonic():
    for k in (0.3, math.sqrt(3.0), 2.2, 3.7):
        assert traps.big_f_cont(HO, k) == pytest.approx(ho_series(-0.5 * k * k), rel=1e-6, abs=1e-9)
    # bare level m = 1: omega = 5/2, k = sqrt(5) up to rounding
    assert abs(traps.big_f_cont(HO, math.sqrt(5.0))) > 1e12


@pytest.mark.parametrize("trap", [traps.TrapModel("box", 0.7), traps.TrapModel("harmonic", 1.3)])
def test_resonance_parts_ratio(trap):
    k = np.array([0.4, 1.7, 2.9, 4.4, 7.3])
    a, b = traps.resonance_parts(trap, k)
    expected = trap.lam**2 * traps.big_f_cont(trap, k) / trap.velocity(k)
    assert np.allclose(b / a, expected, rtol=1e-10)


@pytest.mark.parametrize("trap", [BOX, HO])
@pytest.mark.parametrize("j", [0, 1, 4])
def test_detuned_part_away_from_resonance(trap, j):
    k = np.array([0.5, 1.9, 3.3, 8.1])
    a, _ = traps.resonance_parts(trap, k)
    expected = a / (trap.omega_k(k) - trap.level_energy(j))
    assert np.allclose(traps.detuned_part(trap, j, k), expected, rtol=1e-10)


@given(st.integers(0, 30), st.floats(-1e-7, 1e-7))
def test_detuned_part_finite_at_resonance(j, offset):
    for trap in (BOX, HO):
        k = float(trap.resonance_k(j)) + offset
        value = traps.detuned_part(trap, j, k)
        centre = traps.detuned_part(trap, j, float(trap.resonance_k(j)))
        assert np.isfinite(value)
        assert abs(value - centre) <= 1e-5 * abs(centre)


def test_dressed_resonances_zero_the_level_sum():
    for m in (1, 2, 3):
        assert abs(traps.big_f_cont(BOX, float(BOX.dressed_k(m)))) < 1e-14
        assert abs(traps.big_f_cont(HO, float(HO.dressed_k(m)))) < 1e-12

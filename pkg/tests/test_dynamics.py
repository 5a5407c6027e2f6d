import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import model
from outcoupling import dynamics, specfun
from outcoupling.errors import DomainError


def filled(count):
    return dynamics.Occupations((1.0,) * count, dynamics.FERMI)


def test_fermi_occupations():
    for kind in ("box", "harmonic"):
        occ = dynamics.occupations_fermi(kind, 21)
        assert occ.values == (1.0,) * 11
        assert occ.statistics == "fermi"
    assert dynamics.occupations_fermi("box", 1).values == (1.0,)
    assert len(dynamics.occupations_fermi("box", 20)) == 10


def test_bose_occupations():
    occ = dynamics.occupations_bose("box", 21)
    assert occ.values == (21.0,) and occ.occupied == [0]
    one = dynamics.occupations_bose("harmonic", 1)
    assert one.array.tolist() == dynamics.occupations_fermi("harmonic", 1).array.tolist()


def test_occupation_invariants():
    with pytest.raises(DomainError):
        dynamics.Occupations((2.0,), dynamics.FERMI)
    with pytest.raises(DomainError):
        dynamics.Occupations((1.0, 1.0), dynamics.BOSE)
    with pytest.raises(DomainError):
        dynamics.Occupations((-1.0,), dynamics.BOSE)
    with pytest.raises(DomainError):
        dynamics.Occupations((1.0,), "boltzmann")
    with pytest.raises(DomainError):
        dynamics.occupations_fermi("box", 0)


def test_digest_is_stable_and_distinguishes():
    a = dynamics.occupations_fermi("box", 21).digest()
    assert a == dynamics.occupations_fermi("box", 21).digest()
    assert a != dynamics.occupations_bose("box", 21).digest()


@pytest.mark.parametrize("kind,coupling", [("box", 1.0), ("box", 10.0), ("harmonic", 1.0)])
def test_population_starts_at_one(kind, coupling):
    _, _, cc = model(kind, coupling)
    for j in (0, 3):
        assert dynamics.population_fraction(cc, j, 0.0) == pytest.approx(1.0, abs=1e-4)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 20.0), st.integers(0, 4))
def test_population_is_a_probability(t, j):
    _, _, cc = model("box", 10.0)
    p = dynamics.population_fraction(cc, j, t)
    assert -1e-12 <= p <= 1 + 1e-4


def test_population_rejects_negative_time():
    _, _, cc = model("box", 1.0)
    with pytest.raises(DomainError):
        dynamics.population_fraction(cc, 0, -1.0)


def test_population_late_time_average():
    _, bs, cc = model("box", 10.0)
    series = dynamics.population_series(cc, 0, np.linspace(30.0, 40.0, 200))
    assert series.mean() == pytest.approx(bs.alpha(0) ** 4, abs=1e-4)


def test_population_oscillates():
    _, _, cc = model("box", 10.0)
    p = dynamics.population_series(cc, 0, np.linspace(0.05, 5.0, 100))
    maxima = np.nonzero((p[1:-1] > p[:-2]) & (p[1:-1] > p[2:]))[0]
    assert maxima.size >= 2


def test_residual_population_examples():
    _, bs, _ = model("box", 3.0)
    single = dynamics.occupations_fermi("box", 1)
    assert dynamics.residual_population(bs, single, 0) == pytest.approx(bs.alpha(0) ** 4, rel=1e-14)
    empty = dynamics.Occupations((0.0, 0.0), dynamics.FERMI)
    assert dynamics.residual_population(bs, empty, 0) == 0.0
    assert dynamics.total_residual(bs, empty) == 0.0


@pytest.mark.parametrize("kind,coupling", [("box", 100.0), ("box", 0.1), ("harmonic", 1.0)])
def test_residual_consistency(kind, coupling, fermi21):
    _, bs, _ = model(kind, coupling)
    overlap = dynamics.bound_overlap(bs, fermi21)
    retained = math.sqrt(dynamics.n_max_infty(bs))
    assert dynamics.total_residual(bs, fermi21) == pytest.approx(retained * overlap, rel=1e-12)
    # the retained fraction is the bound mode's total weight on the trap levels
    assert retained == pytest.approx(bs.discrete_weight(), rel=1e-10)
    per_level = sum(dynamics.residual_population(bs, fermi21, j) for j in range(bs.levels_used))
    assert per_level + overlap * bs.tail_weight == pytest.approx(dynamics.total_residual(bs, fermi21), rel=1e-10)


@pytest.mark.parametrize("kind,coupling", [("box", 10.0), ("harmonic", 1.0), ("box", 0.1)])
def test_residual_limit_chain(kind, coupling):
    _, bs, _ = model(kind, coupling)
    values = [dynamics.total_residual(bs, filled(J)) for J in (1, 5, 11, 25)]
    bound = dynamics.n_max_infty(bs)
    assert np.all(np.diff(values) > 0)
    assert values[-1] < bound
    assert dynamics.total_residual(bs, filled(20000)) == pytest.approx(bound, rel=1e-4)


def test_strong_coupling_bound_is_a_quarter():
    for kind in ("box", "harmonic"):
        _, bs, _ = model(kind, 1000.0)
        assert dynamics.n_max_infty(bs) == pytest.approx(0.25, abs=1e-3)


def test_weak_box_residual_scales_as_eighth_power():
    single = dynamics.occupations_fermi("box", 1)
    scaled = [dynamics.total_residual(model("box", d)[1], single) / d**8 for d in (0.02, 0.05, 0.1)]
    assert max(scaled) / min(scaled) - 1 < 0.01
    limit = dynamics.weak_residual_box_limit(1.0, single)
    assert scaled[0] == pytest.approx(limit, rel=0.02)
    assert limit == pytest.approx(1 / (1536 * math.pi**4), rel=1e-14)


def test_weak_harmonic_residual():
    single = dynamics.occupations_fermi("harmonic", 1)
    limit = dynamics.weak_residual_harmonic_limit
    ratios = [dynamics.total_residual(model("harmonic", d)[1], single) / limit(d, single) for d in (0.1, 0.05, 0.02)]
    # the finite-coupling correction shrinks as delta'^4
    assert ratios[0] == pytest.approx(1.0, rel=0.035)
    assert ratios[1] == pytest.approx(1.0, rel=0.005)
    assert ratios[2] == pytest.approx(1.0, rel=1e-4)
    assert (1 - ratios[0]) / (1 - ratios[1]) == pytest.approx(16.0, rel=0.1)
    # the quoted closed form is 16 times the first-principles limit
    assert dynamics.weak_residual_harmonic(0.1, single) / limit(0.1, single) == pytest.approx(16.0, rel=1e-12)
    ratio = math.gamma(0.25) / math.gamma(0.75)
    quoted = 64 * math.sqrt(math.pi) * 0.1**8 * ratio**3 / 0.25**2
    assert dynamics.weak_residual_harmonic(0.1, single) == pytest.approx(quoted, rel=1e-12)
    assert specfun.ho_weight(0) * math.sqrt(math.pi) == pytest.approx(1.0)

"""Trap populations: occupations, survival in a level, and what stays forever."""

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from . import fano, traps
from .errors import DomainError

FERMI = "fermi"
BOSE = "bose"


@dataclass(frozen=True)
class Occupations:
    """Initial populations per coupled level (index j) and their statistics."""

    values: tuple
    statistics: str

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if np.any(vals < 0):
            raise DomainError("occupations must be non-negative")
        if self.statistics == FERMI and np.any((vals != 0) & (vals != 1)):
            raise DomainError("fermionic occupations must be 0 or 1")
        if self.statistics == BOSE and np.any(vals[1:] != 0):
            raise DomainError("bosonic occupations live in the ground coupled level")
        if self.statistics not in (FERMI, BOSE):
            raise DomainError(f"unknown statistics {self.statistics!r}")

    @property
    def array(self):
        return np.asarray(self.values, dtype=float)

    @property
    def occupied(self):
        """Indices of levels with nonzero population."""
        return [j for j, v in enumerate(self.values) if v > 0]

    def __len__(self):
        return len(self.values)

    def digest(self):
        """Short stable tag of the occupation numbers for output metadata."""
        text = ",".join(repr(float(v)) for v in self.values)
        return hashlib.sha256(text.encode()).hexdigest()[:12]


def occupations_fermi(trap, atoms):
    """One atom per coupled level up to the Fermi level of `atoms` spin-polarised fermions."""
    if atoms < 1:
        raise DomainError("atoms must be >= 1")
    # box: odd n <= N; oscillator: even n <= N - 1.  Both give (N + 1)//2 levels.
    count = (atoms + 1) // 2
    return Occupations(tuple([1.0] * count), FERMI)


def occupations_bose(trap, atoms):
    """All `atoms` in the ground coupled level."""
    if atoms < 1:
        raise DomainError("atoms must be >= 1")
    return Occupations((float(atoms),), BOSE)


def _tail_moment(a, K):
    """Integral over k > K of 1/(k^2 - a^2)^2 for K > a, as a series in (a/K)^2."""
    r = (a / K) ** 2
    if r < 0.25:
        total, term_r = 0.0, 1.0
        for p in range(40):
            total += (p + 1) * term_r / (2 * p + 3)
            term_r *= r
            if term_r < 1e-17:
                break
        return total / K**3
    return K / (2 * a * a * (K * K - a * a)) + math.log((K - a) / (K + a)) / (4 * a**3)


def continuum_overlap(cc, j, t, tol=1e-6):
    """Integral over k > 0 of alpha_n(k)^2 exp(-i omega_k t)."""
    tr = cc.trap
    c = tr.dispersion
    K = max(cc.cutoff(t, tol, "pop"), 1.5 * float(tr.resonance_k(j)) + 10.0)
    nodes, weights = fano.continuum_rule(tr, K, t)
    vals = cc.alpha_sq(j, nodes) * np.exp(-1j * c * nodes**2 * t)
    total = np.dot(weights, vals)
    if c * K * K * t <= 0.1:
        a = float(tr.resonance_k(j))
        amp = tr.lam**2 * cc.level(j).weight / (math.pi * c * c)
        total += amp * _tail_moment(a, K) * np.exp(-1j * c * K * K * t)
    return complex(total)


def survival_amplitude(cc, j, t, tol=1e-6):
    """<a_n(t) a_n^dagger(0)>: continuum overlap plus the bound-mode term."""
    bs = cc.bound
    return continuum_overlap(cc, j, t, tol) + bs.alpha(j) ** 2 * np.exp(1j * bs.mu2 * t)


def population_fraction(cc, j, t, tol=1e-6):
    """Fraction of an atom started in level j that is found there at time t."""
    if t < 0:
        raise DomainError("t must be >= 0")
    return abs(survival_amplitude(cc, j, t, tol)) ** 2


def population_series(cc, j, times, tol=1e-6):
    return np.array([population_fraction(cc, j, t, tol) for t in times])


def bound_overlap(bs, occ):
    """Sum over levels of alpha_mu,n^2 times the initial population."""
    return float(sum(bs.alpha(j) ** 2 * v for j, v in enumerate(occ.values)))


def residual_population(bs, occ, j):
    """Infinite-time population of level j."""
    return bs.alpha(j) ** 2 * bound_overlap(bs, occ)


def _retained_fraction(bs):
    """2 mu^2 F' / (2 mu^2 F' - F): the bound mode's total weight on the trap."""
    fp = bs.f_prime
    return 2.0 * bs.mu2 * fp / (2.0 * bs.mu2 * fp - bs.f_value)


def total_residual(bs, occ):
    """Total infinite-time trap population."""
    return bound_overlap(bs, occ) * _retained_fraction(bs)


def n_max_infty(bs):
    """Upper bound on the residual population, reached when every level is filled."""
    return _retained_fraction(bs) ** 2


def weak_residual_box(delta, occ):
    """Quoted weak-coupling closed form delta^8/96 sum occ_n/n^4 (box); see weak_residual_box_limit."""
    n = 2 * np.arange(len(occ)) + 1
    return delta**8 / 96.0 * float(np.sum(occ.array / n**4.0))


def weak_residual_box_limit(delta, occ):
    """Weak-coupling limit of `total_residual` for the box: delta^8 sum occ_n/n^4 / (1536 pi^4)."""
    n = 2 * np.arange(len(occ)) + 1
    return delta**8 / (1536.0 * math.pi**4) * float(np.sum(occ.array / n**4.0))


def weak_residual_harmonic(delta_p, occ):
    """Quoted weak-coupling closed form for the oscillator (64 sqrt(pi) delta'^8 R^3 ...)."""
    from .specfun import gamma_ratio, ho_weights

    ratio = gamma_ratio(0.25, 0.75)
    m = np.arange(len(occ))
    comb = ho_weights(len(occ)) * math.sqrt(math.pi)
    return 64.0 * math.sqrt(math.pi) * delta_p**8 * ratio**3 * float(np.sum(comb / (m + 0.25) ** 2 * occ.array))


def weak_residual_harmonic_limit(delta_p, occ):
    """Weak-coupling limit of `total_residual` for the oscillator (1/16 of the quoted form)."""
    return weak_residual_harmonic(delta_p, occ) / 16.0

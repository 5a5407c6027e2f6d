"""Trap definitions in native units.

Box (width L):       hbar = 1, 2M = 1, L = 1.  Coupled levels n = 1, 3, 5, ...
                     omega_n = pi^2 n^2, |phi_n(0)|^2 = 2, omega_k = k^2.
Harmonic (omega_0):  hbar = M = omega_0 = 1, oscillator length d = 1.
                     Coupled levels n = 0, 2, 4, ..., omega_n = n + 1/2,
                     |phi_2m(0)|^2 = ho_weight(m), omega_k = k^2/2.

Only even wavefunctions have weight at the coupling point, so level index j
maps to n = 2j + 1 (box) or n = 2j (harmonic).

The level sum F(y) = sum_n |phi_n(0)|^2/(y + omega_n) has closed forms.  For the
continuum response we also need F at y = -omega_k, where it has poles at every
trap level.  Downstream code never uses that continuation directly; it uses
the pair (A, B) from `resonance_parts`, with

    B/A = lam^2 F(-omega_k) / v_k ,   v_k = 2 c k ,

and A, B smooth and never simultaneously zero.  A vanishes at the bare trap
levels, B at the dressed levels.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError

BOX = "box"
HARMONIC = "harmonic"
KINDS = (BOX, HARMONIC)

# Taylor coefficients of tanh(u)/u in powers of u^2
_TANH_SERIES = (1.0, -1.0 / 3.0, 2.0 / 15.0, -17.0 / 315.0, 62.0 / 2835.0, -1382.0 / 155925.0)

UNITS = {
    BOX: "hbar = 1, 2M = 1, L = 1: omega_n = pi^2 n^2, omega_k = k^2, tau = t",
    HARMONIC: "hbar = M = omega_0 = 1, d = 1: omega_n = n + 1/2, omega_k = k^2/2, tau = 2t",
}


@dataclass(frozen=True)
class TrapModel:
    """Trap kind plus dimensionless coupling (delta for the box, delta' for the oscillator)."""

    kind: str
    coupling: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown trap kind {self.kind!r}")
        if not (math.isfinite(self.coupling) and self.coupling > 0):
            raise DomainError("coupling must be a finite positive number")

    @property
    def dispersion(self):
        """c in omega_k = c k^2."""
        return 1.0 if self.kind == BOX else 0.5

    @property
    def lam(self):
        """Bare coupling constant in native units."""
        return self.coupling if self.kind == BOX else 2.0 * self.coupling

    def omega_k(self, k):
        return self.dispersion * np.square(k)

    def velocity(self, k):
        return 2.0 * self.dispersion * np.asarray(k)

    def time_from_tau(self, tau):
        return tau if self.kind == BOX else 0.5 * tau

    def tau_from_time(self, t):
        return t if self.kind == BOX else 2.0 * t

    def quantum_number(self, j):
        return 2 * j + 1 if self.kind == BOX else 2 * j

    def level_energy(self, j):
        j = np.asarray(j)
        if self.kind == BOX:
            return np.pi**2 * (2 * j + 1.0) ** 2
        return 2.0 * j + 0.5

    def level_weights(self, count):
        if self.kind == BOX:
            return np.full(count, 2.0)
        return specfun.ho_weights(count)

    def resonance_k(self, j):
        """Wave number where omega_k equals the bare level energy."""
        return np.sqrt(self.level_energy(j) / self.dispersion)

    def dressed_k(self, m):
        """Wave numbers of the strong-coupling (dressed) resonances, m = 1, 2, ...

        Box: k = 2 m pi.  Oscillator: (k/2)^2 = m - 1/4, i.e. the zeros of
        F(-omega_k) between consecutive bare levels.
        """
        m = np.asarray(m, dtype=float)
        if self.kind == BOX:
            return 2.0 * np.pi * m
        return 2.0 * np.sqrt(m - 0.25)


@dataclass(frozen=True)
class CoupledLevel:
    index: int
    n: int
    energy: float
    weight: float

    @property
    def phi0(self):
        """phi_n(0) with the sign convention phi_n(0) > 0."""
        return math.sqrt(self.weight)


def coupled_levels(trap, count):
    """First `count` even-parity levels in increasing energy."""
    if count < 1:
        raise DomainError("count must be >= 1")
    weights = trap.level_weights(count)
    return [
        CoupledLevel(j, trap.quantum_number(j), float(trap.level_energy(j)), float(weights[j]))
        for j in range(count)
    ]


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _out(values, scalar):
    return float(values) if scalar else values


def big_f(trap, y):
    """F(y) = sum_n |phi_n(0)|^2/(y + omega_n) for y >= 0."""
    arr, scalar = _as_array(y)
    if np.any(arr < 0):
        raise DomainError("big_f needs y >= 0")
    if trap.kind == BOX:
        small = arr < 0.01
        u2 = 0.25 * np.where(small, arr, 0.0)
        series = np.zeros_like(arr)
        for c in reversed(_TANH_SERIES):
            series = series * u2 + c
        s = np.sqrt(np.where(small, 1.0, arr))
        out = np.where(small, 0.25 * series, np.tanh(0.5 * s) / (2.0 * s))
    else:
        out = 0.5 * np.asarray(specfun.ho_sum(0.25 + 0.5 * arr))
    return _out(out, scalar)


def big_f_prime(trap, y):
    """dF/dy for y >= 0; always negative."""
    arr, scalar = _as_array(y)
    if np.any(arr < 0):
        raise DomainError("big_f_prime needs y >= 0")
    if trap.kind == BOX:
        small = arr < 0.01
        u2 = 0.25 * np.where(small, arr, 0.0)
        # d/dy of (1/4) sum c_j (y/4)^j
        series = np.zeros_like(arr)
        for j in range(len(_TANH_SERIES) - 1, 0, -1):
            series = series * u2 + j * _TANH_SERIES[j]
        s = np.sqrt(np.where(small, 1.0, arr))
        half = 0.5 * s
        decay = np.exp(-s)
        sech2 = 4.0 * decay / (1.0 + decay) ** 2
        closed = (s * sech2 - 2.0 * np.tanh(half)) / (8.0 * s**3)
        out = np.where(small, series / 16.0, closed)
    else:
        a = 0.25 + 0.5 * arr
        out = np.asarray(big_f(trap, arr)) * 0.5 * (
            np.asarray(specfun.digamma(a)) - np.asarray(specfun.digamma(a + 0.5))
        )
    return _out(out, scalar)


def big_f_cont(trap, k):
    """F(-omega_k) for k > 0, with signed infinities at the bare levels."""
    arr, scalar = _as_array(k)
    if np.any(arr <= 0):
        raise DomainError("big_f_cont needs k > 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        if trap.kind == BOX:
            half = 0.5 * arr
            out = np.tan(half) / (2.0 * arr)
            # exact tan poles at odd multiples of pi
            ratio = arr / np.pi
            pole = (np.abs(ratio - np.round(ratio)) < 1e-15 * ratio) & (np.mod(np.round(ratio), 2) == 1)
            out = np.where(pole, np.inf, out)
        else:
            a = 0.25 - 0.25 * arr**2
            num = np.asarray(specfun.recip_gamma(a + 0.5))
            den = np.asarray(specfun.recip_gamma(a))
            out = np.where(den == 0.0, np.copysign(np.inf, num), num / (2.0 * np.where(den == 0.0, 1.0, den)))
    return _out(out, scalar)


def _ho_rho(k):
    """Gamma(1/4 + k^2/4)/Gamma(3/4 + k^2/4), positive and smooth."""
    q = 0.25 * np.square(k)
    return np.asarray(specfun.gamma_ratio(0.25 + q, 0.75 + q))


def resonance_parts(trap, k):
    """Smooth pair (A, B) with B/A = lam^2 F(-omega_k)/v_k.

    Box:       A = 4 k^2 cos(k/2),     B = delta^2 sin(k/2).
    Harmonic:  with a = 1/4 - k^2/4,
               A = k sin(pi a),        B = 2 delta'^2 rho(k) cos(pi a),
    where the reflection formula turns the Gamma ratio of negative arguments
    into rho(k) = Gamma(1/4 + k^2/4)/Gamma(3/4 + k^2/4) times trig factors.
    """
    k = np.asarray(k, dtype=float)
    if trap.kind == BOX:
        return 4.0 * k * k * np.cos(0.5 * k), trap.coupling**2 * np.sin(0.5 * k)
    a = 0.25 - 0.25 * k * k
    return k * np.sin(np.pi * a), 2.0 * trap.coupling**2 * _ho_rho(k) * np.cos(np.pi * a)


def detuned_part(trap, j, k):
    """A(k)/(omega_k - omega_n) for level j, finite at k^2 = omega_n/c."""
    k = np.asarray(k, dtype=float)
    if trap.kind == BOX:
        kn = np.pi * (2 * j + 1)
        sign = -1.0 if j % 2 else 1.0
        # cos(k/2) = -sign sin((k - kn)/2) for odd n
        return -2.0 * sign * k * k * np.sinc((k - kn) / (2.0 * np.pi)) / (k + kn)
    a = 0.25 - 0.25 * k * k
    sign = -1.0 if j % 2 else 1.0
    # omega_k - omega_n = -2 (a + j) and sin(pi a) = (-1)^j sin(pi (a + j))
    return -0.5 * np.pi * sign * k * np.sinc(a + j)


def structure_points(trap, k_max):
    """Bare and dressed resonance wave numbers in (0, k_max], sorted.

    Each comes with a width estimate: the distance over which |B/A| or |A/B|
    changes by order one around the zero.
    """
    pts = []
    j = 0
    while True:
        kr = float(trap.resonance_k(j))
        if kr > k_max:
            break
        pts.append(kr)
        j += 1
    m = 1
    while True:
        kd = float(trap.dressed_k(m))
        if kd > k_max:
            break
        pts.append(kd)
        m += 1
    pts = np.array(sorted(pts))
    if pts.size == 0:
        return pts, pts
    widths = _feature_widths(trap, pts)
    return pts, widths


def _feature_widths(trap, pts):
    h = 1e-6 * np.maximum(pts, 1.0)
    a0, b0 = resonance_parts(trap, pts)
    a1, b1 = resonance_parts(trap, pts + h)
    am, bm = resonance_parts(trap, pts - h)
    da = (a1 - am) / (2 * h)
    db = (b1 - bm) / (2 * h)
    width_bare = np.abs(b0) / np.maximum(np.abs(da), 1e-300)
    width_dressed = np.abs(a0) / np.maximum(np.abs(db), 1e-300)
    bare = np.abs(a0) < np.abs(b0)
    return np.where(bare, width_bare, width_dressed)

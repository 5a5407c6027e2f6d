"""Outgoing-beam observables: spectra, field amplitudes and correlations.

Spectra are densities per unit k on k > 0 (the distribution is even in k).
The spectrum of level j at infinite time is alpha_n(k)^2 / 2 per atom.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import fano, quad, traps
from .errors import ConvergenceError, DomainError
from .specfun import gamma_ratio, ho_weights

EXACT = "exact-infinite"
WEAK = "weak-approx"
STRONG = "strong-approx"
TIMED = "time-dependent"


@dataclass(frozen=True)
class SpectrumResult:
    k: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    method: str
    time: float = None
    kind: str = None
    coupling: float = None
    occupations: str = None

    def __post_init__(self):
        if np.any(np.diff(self.k) <= 0):
            raise DomainError("k grid must be strictly increasing")


@dataclass(frozen=True)
class CorrelationResult:
    x: np.ndarray = field(repr=False)
    x_prime: float
    g1: np.ndarray = field(repr=False)
    g2: np.ndarray = field(repr=False)
    intensity: np.ndarray = field(repr=False)
    intensity_prime: float
    G1: np.ndarray = field(repr=False)


def _grid(k):
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if np.any(k <= 0):
        raise DomainError("spectra are defined for k > 0")
    return k


def _occ_levels(occ):
    return [(j, v) for j, v in enumerate(occ.values) if v > 0]


def _meta(trap, occ):
    return dict(kind=trap.kind, coupling=trap.coupling, occupations=occ.digest())


def spectrum_infinite(trap, bs, occ, k, include_bound=False, t=None, cc=None):
    """Infinite-time outgoing spectrum.

    With `include_bound`, the bound-mode amplitude on each free wave is added:
    coherently at time `t` when given, otherwise as its time average (no
    cross term).
    """
    k = _grid(k)
    cc = cc or fano.ContinuumCoeffs(trap, bs)
    values = np.zeros_like(k)
    for j, v in _occ_levels(occ):
        if not include_bound:
            values += v * cc.alpha_sq(j, k)
        elif t is None:
            values += v * (cc.alpha_sq(j, k) + (fano.gamma_mu(bs, k) * bs.alpha(j)) ** 2)
        else:
            amp = cc.asymptotic_amplitude(j, k) * np.exp(-1j * trap.omega_k(k) * t) + cc.bound_term(j, k, t)
            values += v * np.abs(amp) ** 2
    return SpectrumResult(k, 0.5 * values, EXACT, t, **_meta(trap, occ))


def spectrum_weak_box(delta, occ, k):
    """Sum of Lorentzians at k = n pi with half width delta^2/(2 n^2 pi^2)."""
    k = _grid(k)
    values = np.zeros_like(k)
    for j, v in _occ_levels(occ):
        n = 2 * j + 1
        hw = delta**2 / (2.0 * n * n * math.pi**2)
        values += v * delta**2 / (4.0 * math.pi**3 * n * n) / ((k - n * math.pi) ** 2 + hw * hw)
    return SpectrumResult(k, values, WEAK, None, traps.BOX, delta, occ.digest())


def strong_box_weight(m, n):
    """Feeding weight m^4/(4m^2 - n^2)^2 of dressed peak m by level n."""
    return m**4 / (4.0 * m * m - n * n) ** 2


def spectrum_strong_box(delta, occ, k):
    """Sum of Lorentzians at k = 2 m pi with half width 32 (m pi/delta)^2, fed by every level."""
    k = _grid(k)
    m_top = int(k.max() / (2.0 * math.pi)) + 200
    values = np.zeros_like(k)
    levels = _occ_levels(occ)
    for m in range(1, m_top + 1):
        weight = sum(v * strong_box_weight(m, 2 * j + 1) for j, v in levels)
        hw = (4.0 * math.sqrt(2.0) * m * math.pi / delta) ** 2
        values += 1024.0 / (math.pi * delta**2) * weight / (hw * hw + (k - 2 * m * math.pi) ** 2)
    return SpectrumResult(k, values, STRONG, None, traps.BOX, delta, occ.digest())


def weak_ho_width(delta_p, m):
    """Half width in y = (k/2)^2 of weak peak m: delta'^2 Gamma(m+1/2)/(pi m! sqrt(m+1/4))."""
    m = np.asarray(m, dtype=float)
    return delta_p**2 / math.pi * np.asarray(gamma_ratio(m + 0.5, m + 1.0)) / np.sqrt(m + 0.25)


def strong_ho_width(delta_p, m):
    """Half width in y = (k/2)^2 of strong peak m: sqrt(m+3/4) Gamma(m+3/2)/(delta'^2 pi m!)."""
    m = np.asarray(m, dtype=float)
    return np.sqrt(m + 0.75) * np.asarray(gamma_ratio(m + 1.5, m + 1.0)) / (delta_p**2 * math.pi)


def spectrum_weak_ho(delta_p, occ, k):
    """Lorentzians in y = (k/2)^2 at y = m + 1/4, one per occupied level.

    Each peak integrates to half its occupation over k, as unitarity requires.
    """
    k = _grid(k)
    y = 0.25 * k * k
    values = np.zeros_like(k)
    comb = ho_weights(len(occ)) * math.sqrt(math.pi)
    for j, v in _occ_levels(occ):
        hw = float(weak_ho_width(delta_p, j))
        values += v * delta_p**2 / (2.0 * math.pi**1.5) * comb[j] / ((y - j - 0.25) ** 2 + hw * hw)
    return SpectrumResult(k, values, WEAK, None, traps.HARMONIC, delta_p, occ.digest())


def spectrum_strong_ho(delta_p, occ, k):
    """Lorentzians in y = (k/2)^2 at the dressed energies y = m + 3/4, fed by every level."""
    k = _grid(k)
    y = 0.25 * k * k
    m_top = int(y.max()) + 200
    values = np.zeros_like(k)
    levels = _occ_levels(occ)
    comb = ho_weights(len(occ)) * math.sqrt(math.pi)
    for m in range(0, m_top + 1):
        ratio = float(gamma_ratio(m + 1.5, m + 1.0))
        feed = sum(v * comb[n] / (m - n + 0.5) ** 2 for n, v in levels)
        hw = float(strong_ho_width(delta_p, m))
        amp = (m + 0.75) * ratio * ratio * feed / (2.0 * delta_p**2 * math.pi**3.5)
        values += amp / ((y - m - 0.75) ** 2 + hw * hw)
    return SpectrumResult(k, values, STRONG, None, traps.HARMONIC, delta_p, occ.digest())


def spectrum_time(trap, cc, occ, k, t, tol=1e-6):
    """Outgoing spectrum at time t from the exact amplitudes C_n(k, t)."""
    k = _grid(k)
    levels = _occ_levels(occ)
    amps = cc.c_coefficient([j for j, _ in levels], k, t, tol=tol)
    weights = np.array([v for _, v in levels])
    values = 0.5 * (weights[:, None] * np.abs(amps) ** 2).sum(axis=0)
    return SpectrumResult(k, values, TIMED, t, **_meta(trap, occ))


# ---------------------------------------------------------------------------
# field amplitudes


def bound_field(trap, bs, j, x, t):
    """Bound-mode part of N(n, x, t): an exponential in |x| rotating as exp(i mu^2 t)."""
    c = trap.dispersion
    x = np.asarray(x, dtype=float)
    scale = trap.lam * bs.f_value / (2.0 * math.sqrt(c) * bs.norm_denominator)
    return -1j * scale * bs.alpha(j) * np.exp(-bs.mu * np.abs(x) / math.sqrt(c) + 1j * bs.mu2 * t)


def _field_cutoff(trap, cc, j, x_max, t, tol):
    c = trap.dispersion
    g = trap.lam * cc.level(j).phi0 / math.sqrt(math.pi)
    k_front = x_max / (2.0 * c * t) if t > 0 else 0.0
    k_res = float(trap.resonance_k(j))
    k_tail = (g / (2.0 * c * c * max(t, 1e-12) * math.sqrt(math.pi) * tol)) ** (1.0 / 3.0)
    return max(1.5 * k_front, 1.5 * k_res, 10.0) + min(k_tail, 200.0)


def field_coefficient(trap, bs, j, x, t, cc=None, exact=False, tol=1e-6, K=None):
    """Source amplitude N(n, x, t) of the outgoing field for an atom started in level j.

    Default path: bound part in closed form plus the running part built from
    the infinite-time amplitudes, which is only right once every resonance has
    decayed (its spurious incoming wave dies as exp(-Gamma t)).  `exact=True`
    keeps the transient: the principal-value part of C_n is transformed first,
    using  PV int_0^inf cos(k x)/(k'^2 - k^2) dk = pi sin(k'|x|)/(2k'),
    which leaves one oscillatory integral per point.

    `j` may be a sequence of levels; they then share one mesh and the result
    has a leading level axis.
    """
    single = np.ndim(j) == 0
    js = [int(j)] if single else [int(v) for v in j]
    cc = cc or fano.ContinuumCoeffs(trap, bs)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    c = trap.dispersion
    x_max = float(np.abs(x).max())
    if K is None:
        K = max(_field_cutoff(trap, cc, jj, x_max, t, tol) for jj in js)
    if not exact and t <= 0:
        raise DomainError("the asymptotic field path needs t > 0")
    nodes, weights = fano.continuum_rule(trap, K, t, x_max=x_max)
    phase = weights * np.exp(-1j * c * nodes**2 * t)
    if exact:
        even = np.stack([1j * cc.delta_part(jj, nodes) for jj in js], axis=1) * phase[:, None]
        odd = np.stack([1j * cc.pv_density(jj, nodes) for jj in js], axis=1)
        odd *= (phase * (0.5 * np.pi / c) / nodes)[:, None]
    else:
        even = np.stack([cc.asymptotic_amplitude(jj, nodes) for jj in js], axis=1) * phase[:, None]
        odd = None
    running = np.empty((x.size, len(js)), dtype=complex)
    chunk = max(1, int(4_000_000 // nodes.size))
    for start in range(0, x.size, chunk):
        arg = np.outer(np.abs(x[start:start + chunk]), nodes)
        block = np.cos(arg) @ even
        if odd is not None:
            block += np.sin(arg) @ odd
        running[start:start + chunk] = block
    out = running.T / math.sqrt(math.pi)
    for row, jj in enumerate(js):
        out[row] += bound_field(trap, bs, jj, x, t)
    return out[0] if single else out


def moshinsky_packet(n, x, tau, delta, tol=1e-10):
    """Weak-coupling running wave packet of level n in the box.

    (1/n) * integral over y > 0 of exp(-i y^2 tau) cos(y x) / (y - n pi + 2i (delta/(2 n pi))^2).
    """
    if n < 1 or n % 2 == 0:
        raise DomainError("n must be an odd positive integer")
    pole = n * math.pi - 2j * (delta / (2.0 * n * math.pi)) ** 2
    taus = np.atleast_1d(np.asarray(tau, dtype=float))
    out = np.empty(taus.size, dtype=complex)
    for i, tt in enumerate(taus):
        if not tt > 0:
            raise DomainError("tau must be > 0")
        plus = quad.integrate_fresnel_pole(pole, x, tt, tol)
        minus = quad.integrate_fresnel_pole(pole, -x, tt, tol)
        out[i] = 0.5 * (plus + minus) / n
    return complex(out[0]) if np.ndim(tau) == 0 else out


# ---------------------------------------------------------------------------
# correlations


class DegenerateIntensityError(DomainError):
    """Beam intensity too small for a normalised correlation at some point."""


def correlations(trap, bs, occ, x, x_prime, t, cc=None, exact=False, tol=1e-6, floor=1e-12):
    """First- and second-order coherence against a reference point x'."""
    cc = cc or fano.ContinuumCoeffs(trap, bs)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    pts = np.append(x, x_prime)
    levels = _occ_levels(occ)
    fields = field_coefficient(trap, bs, [j for j, _ in levels], pts, t, cc=cc, exact=exact, tol=tol)
    weights = np.array([v for _, v in levels])[:, None]
    ref = fields[:, -1:]
    fields = fields[:, :-1]
    G1 = (weights * np.conj(fields) * ref).sum(axis=0)
    intensity = (weights * (fields.real**2 + fields.imag**2)).sum(axis=0)
    intensity_prime = float((weights[:, 0] * (ref[:, 0].real ** 2 + ref[:, 0].imag ** 2)).sum())
    top = max(float(intensity.max()), intensity_prime)
    if np.any(intensity < floor * top) or intensity_prime < floor * top:
        bad = x[intensity < floor * top]
        raise DegenerateIntensityError(
            f"intensity below {floor:g} of its maximum at {bad.size} points (first x = {bad[:1]})"
        )
    g1 = G1 / np.sqrt(intensity * intensity_prime)
    same = x == x_prime
    g1[same] = 1.0
    g2 = 1.0 - np.abs(g1) ** 2
    g2[same] = 0.0
    return CorrelationResult(x, float(x_prime), g1, g2, intensity, intensity_prime, G1)


# ---------------------------------------------------------------------------
# peak analysis on smooth spectra


@dataclass(frozen=True)
class Peak:
    center: float
    height: float
    fwhm: float
    area: float
    left_half: float
    right_half: float


def figure_grid(trap, k_max, points=2001, occ=None):
    """Uniform grid on (0, k_max] plus every bare and dressed resonance in range.

    The resonance points guarantee that even peaks much narrower than the
    uniform spacing are sampled at their crest.
    """
    uniform = k_max * np.arange(1, points + 1) / points
    pts, widths = traps.structure_points(trap, k_max)
    extra = np.concatenate((pts, pts - widths, pts + widths))
    extra = extra[(extra > 0) & (extra <= k_max)]
    return np.unique(np.concatenate((uniform, extra)))


def find_peaks(k, values, rel_height=1e-3):
    """Indices of local maxima at least `rel_height` times the global maximum."""
    v = np.asarray(values)
    inner = np.nonzero((v[1:-1] > v[:-2]) & (v[1:-1] >= v[2:]))[0] + 1
    top = v.max()
    return [int(i) for i in inner if v[i] >= rel_height * top]


def _golden_max(f, a, b, tol):
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def analyze_peak(fn, k_lo, k_guess, k_hi, area_bounds=None, refine_width=None):
    """Center, height, FWHM and area of a single peak of the scalar spectrum fn.

    fn maps an array of k to spectral values.  The crest is located by golden
    section search, the half-maximum points by bracketed root finding, and
    the area (between `area_bounds`) by adaptive quadrature.
    """
    def f1(x):
        return float(fn(np.array([x]))[0])

    def sorted_fn(x):
        order = np.argsort(x)
        out = np.empty_like(x)
        out[order] = fn(x[order])
        return out

    w = refine_width or (k_hi - k_lo) * 0.5
    a, b = max(k_lo, k_guess - w), min(k_hi, k_guess + w)
    center = _golden_max(f1, a, b, 1e-13 * max(1.0, k_guess))
    height = f1(center)
    half = 0.5 * height

    def h(x):
        return f1(x) - half

    left = _half_point(h, center, k_lo, -1)
    right = _half_point(h, center, k_hi, +1)
    area = float("nan")
    if area_bounds is not None:
        lo, hi = area_bounds
        cuts = np.array([center - 10 * (right - left), left, center, right, center + 10 * (right - left)])
        res = quad.integrate_adaptive(sorted_fn, lo, hi, 1e-9 * max(height * (right - left), 1e-300), breakpoints=cuts)
        area = float(res.value)
    return Peak(center, height, right - left, area, left, right)


def _half_point(h, center, limit, direction):
    step = 1e-12 * max(1.0, abs(center))
    x0 = center
    x1 = center + direction * step
    while h(x1) > 0:
        x0 = x1
        step *= 2.0
        x1 = center + direction * step
        if (x1 - limit) * direction > 0:
            raise ConvergenceError("analyze_peak", "no half-maximum crossing before the search limit", center=center)
    lo, hi = sorted((x0, x1))
    return quad.find_root_bracketed(h, lo, hi, tol=1e-14 * max(1.0, abs(center)))

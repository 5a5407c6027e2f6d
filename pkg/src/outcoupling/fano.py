"""Exact diagonalisation data: the bound state and the continuum coefficients.

Conventions (native units of `traps`):

* the bound mode has energy -mu^2 and solves  lam^2 F(mu^2) = 2 sqrt(c) mu;
* alpha_mu[j] = phi_n(0) mu / ((mu^2 + omega_n) D),  D^2 = F/2 - mu^2 F';
* gamma_mu(k) = lam mu F / (sqrt(pi) (mu^2 + omega_k) D), the bound-mode
  amplitude on the free wave k apart from a fixed phase i;
* continuum amplitudes alpha_n(k) use the smooth gauge of `resonance_parts`,
  alpha_n(k) = -(lam/sqrt(pi)) phi_n(0) [A/(omega_k - omega_n)] / sqrt(A^2 + B^2).

The free waves are cos(k x) standing waves with k > 0, normalised to delta(k - k').
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import quad, traps
from .errors import ConvergenceError, DomainError

SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class BoundState:
    trap: traps.TrapModel
    mu: float
    alpha_mu: np.ndarray = field(repr=False)
    norm_denominator: float
    levels_used: int
    tail_weight: float

    @property
    def energy(self):
        return -self.mu**2

    @property
    def mu2(self):
        return self.mu**2

    @property
    def f_value(self):
        return traps.big_f(self.trap, self.mu2)

    @property
    def f_prime(self):
        return traps.big_f_prime(self.trap, self.mu2)

    def alpha(self, j):
        """alpha_mu for level j, also beyond the stored levels."""
        if j < self.alpha_mu.size:
            return float(self.alpha_mu[j])
        return float(_alpha_mu_levels(self.trap, self.mu, self.norm_denominator, np.array([j]))[0])

    def eigen_residual(self):
        tr = self.trap
        return tr.lam**2 * self.f_value - 2.0 * math.sqrt(tr.dispersion) * self.mu

    def discrete_weight(self):
        """Sum of alpha_mu^2 over all coupled levels (explicit part plus tail)."""
        return float(np.sum(self.alpha_mu[: self.levels_used] ** 2)) + self.tail_weight

    def continuum_weight(self):
        """Integral of gamma_mu(k)^2 over k > 0, in closed form."""
        tr = self.trap
        return tr.lam**2 * self.f_value**2 / (4.0 * math.sqrt(tr.dispersion) * self.mu * self.norm_denominator**2)

    def completeness(self):
        return self.discrete_weight() + self.continuum_weight()


def eigen_function(trap, mu):
    """lam^2 F(mu^2) - 2 sqrt(c) mu: decreasing in mu, positive at 0."""
    return trap.lam**2 * traps.big_f(trap, mu * mu) - 2.0 * math.sqrt(trap.dispersion) * mu


def _alpha_mu_levels(trap, mu, denom, j):
    omega = trap.level_energy(j)
    if trap.kind == traps.BOX:
        phi = np.full(np.shape(j), math.sqrt(2.0))
    else:
        phi = np.sqrt(_continuous_ho_weight(np.asarray(j, dtype=float)))
    return phi * mu / ((mu * mu + omega) * denom)


def _continuous_ho_weight(m):
    from .specfun import gamma_ratio

    return np.asarray(gamma_ratio(m + 0.5, m + 1.0)) / math.pi


def _discrete_tail(trap, mu, denom, start):
    """Sum over j >= start of alpha_mu(j)^2 by the midpoint integral rule.

    The summand is smooth and decays as a power of j, so the sum equals the
    integral from start - 1/2 to infinity up to a second-derivative term far
    below the required accuracy.  Substituting j = s0/u^2 maps it to (0, 1]
    with an integrand vanishing at u = 0 (the oscillator terms fall only as
    j^-5/2, which leaves a sqrt(u) endpoint under the plain j = s0/u map).
    """
    s0 = start - 0.5

    def integrand(u):
        jj = s0 / (u * u)
        val = _alpha_mu_levels(trap, mu, denom, jj) ** 2
        return val * 2.0 * s0 / u**3

    return float(quad.integrate_adaptive(integrand, 0.0, 1.0, 1e-12).value)


def solve_bound_state(trap, levels=64, explicit_levels=None):
    """Bound state of the coupled trap.

    `levels` alpha_mu values are stored.  The discrete normalisation sum uses
    `explicit_levels` terms directly (default: enough for the summand to fall
    under 1e-12 relative) and an integral estimate for the remainder.
    """
    if levels < 1:
        raise DomainError("levels must be >= 1")
    c = trap.dispersion
    hi = trap.lam**2 * traps.big_f(trap, 0.0) / (2.0 * math.sqrt(c)) + 1.0
    mu = quad.find_root_bracketed(lambda m: eigen_function(trap, m), 0.0, hi, tol=0.0)
    if not mu > 0:
        raise ConvergenceError("solve_bound_state", "non-positive root", coupling=trap.coupling)
    y = mu * mu
    denom = math.sqrt(traps.big_f(trap, y) / 2.0 - y * traps.big_f_prime(trap, y))

    if explicit_levels is None:
        explicit_levels = 2000 if trap.kind == traps.BOX else 20000
    count = max(levels, explicit_levels)
    alpha = _alpha_mu_levels(trap, mu, denom, np.arange(count))
    tail = _discrete_tail(trap, mu, denom, explicit_levels)
    return BoundState(trap, mu, alpha, denom, explicit_levels, tail)


def gamma_mu(bs, k):
    """Bound-mode amplitude on the free wave k (real factor of the phase i)."""
    tr = bs.trap
    return tr.lam * bs.mu * bs.f_value / (SQRT_PI * (bs.mu2 + tr.omega_k(k)) * bs.norm_denominator)


def z_of_k(trap, k):
    """Z(k) = -v_k pi / (lam^2 F(-omega_k)); zero at bare levels, infinite at dressed ones."""
    a, b = traps.resonance_parts(trap, k)
    # b vanishes at the dressed levels; rounding leaves it at a few ulps of its scale
    b = np.where(np.abs(b) <= 4.0 * np.finfo(float).eps * trap.lam**2, 0.0, b)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(b == 0.0, -np.copysign(np.inf, a), -np.pi * a / np.where(b == 0.0, 1.0, b))
    return float(z) if np.ndim(z) == 0 else z


# ---------------------------------------------------------------------------
# quadrature mesh on k > 0


def _graded_edges(lo, hi, w_lo, w_hi, h_max):
    """Panel edges on [lo, hi] refined geometrically toward both ends."""
    mid = 0.5 * (lo + hi)
    left = [lo]
    if w_lo is not None:
        step = w_lo / 8.0
        x = lo + step
        while x < mid - step:
            left.append(x)
            step *= 2.0
            x = lo + step
    right = [hi]
    if w_hi is not None:
        step = w_hi / 8.0
        x = hi - step
        while x > mid + step:
            right.append(x)
            step *= 2.0
            x = hi - step
    edges = np.array(sorted(set(left + [mid] + right)))
    return edges


def _refine(edges, h_of_x):
    """Subdivide each panel uniformly so its length is below h_of_x(right end)."""
    out = [edges[:1]]
    lengths = np.diff(edges)
    caps = h_of_x(edges[1:])
    pieces = np.maximum(1, np.ceil(lengths / caps)).astype(int)
    for lo, length, n in zip(edges[:-1], lengths, pieces):
        out.append(lo + length * np.arange(1, n + 1) / n)
    return np.concatenate(out)


def continuum_rule(trap, k_max, t=0.0, x_max=0.0, extra_points=(), order=16, h_max=0.5, phase_step=4.0,
                   max_panels=1_000_000):
    """Gauss-Legendre nodes and weights on (0, k_max] adapted to the model.

    Panels are graded toward every bare and dressed resonance (and any
    `extra_points`), and kept short enough that the phase k x + omega_k t
    advances by at most `phase_step` per panel.  Meshes needing more than
    `max_panels` panels raise ConvergenceError instead of exhausting memory.
    """
    c = trap.dispersion

    def cap(x):
        rate = abs(x_max) + 2.0 * c * x * t
        return np.minimum(h_max, phase_step / np.maximum(rate, 1e-300))

    pts, widths = traps.structure_points(trap, k_max)
    # features wider than the phase-limited panel are resolved without grading
    narrow = widths < cap(pts)
    pts, widths = pts[narrow], widths[narrow]
    extra = np.asarray([p for p in np.ravel(extra_points) if 0 < p < k_max], dtype=float)
    if extra.size:
        pts = np.concatenate((pts, extra))
        widths = np.concatenate((widths, np.full(extra.size, h_max)))
        order_idx = np.argsort(pts)
        pts, widths = pts[order_idx], widths[order_idx]
    # drop duplicates, keeping the narrowest width
    if pts.size:
        keep_pts, keep_w = [pts[0]], [widths[0]]
        for p, w in zip(pts[1:], widths[1:]):
            if p - keep_pts[-1] < 1e-12 * max(p, 1.0):
                keep_w[-1] = min(keep_w[-1], w)
            else:
                keep_pts.append(p)
                keep_w.append(w)
        pts, widths = np.array(keep_pts), np.array(keep_w)
    anchors = np.concatenate(([0.0], pts, [k_max]))
    anchor_w = np.concatenate(([None], widths, [None]))
    pieces = []
    for i in range(anchors.size - 1):
        e = _graded_edges(anchors[i], anchors[i + 1], anchor_w[i], anchor_w[i + 1], h_max)
        pieces.append(e if i == 0 else e[1:])
    edges = np.concatenate(pieces)
    lengths = np.diff(edges)
    panels = int(np.sum(np.maximum(1, np.ceil(lengths / cap(edges[1:])))))
    if panels > max_panels:
        raise ConvergenceError("continuum_rule", "mesh exceeds the panel budget", panels=panels,
                               k_max=float(k_max), t=float(t), x_max=float(x_max))
    edges = _refine(edges, cap)
    return quad.panel_rule(edges, order)


# ---------------------------------------------------------------------------
# continuum coefficients


def _levels(trap, count):
    return traps.coupled_levels(trap, count)


class ContinuumCoeffs:
    """Continuum coefficient functions for one trap and its bound state."""

    def __init__(self, trap, bs, levels=None):
        self.trap = trap
        self.bound = bs
        self.levels = _levels(trap, levels or 64)

    def level(self, j):
        if j < len(self.levels):
            return self.levels[j]
        return traps.coupled_levels(self.trap, j + 1)[j]

    def _prefactor(self, j):
        return self.trap.lam * self.level(j).phi0 / SQRT_PI

    def alpha(self, j, k):
        """alpha_n(k), finite and smooth through the bare resonance of level j."""
        tr = self.trap
        a, b = traps.resonance_parts(tr, k)
        return -self._prefactor(j) * traps.detuned_part(tr, j, k) / np.hypot(a, b)

    def alpha_sq(self, j, k):
        tr = self.trap
        a, b = traps.resonance_parts(tr, k)
        d = traps.detuned_part(tr, j, k)
        return self._prefactor(j) ** 2 * d * d / (a * a + b * b)

    def delta_part(self, j, k):
        """Z alpha_n / sqrt(pi^2 + Z^2): weight of the on-shell term."""
        tr = self.trap
        a, b = traps.resonance_parts(tr, k)
        return self._prefactor(j) * traps.detuned_part(tr, j, k) * a / (a * a + b * b)

    def pv_density(self, j, k):
        """v_k alpha_n / sqrt(pi^2 + Z^2): numerator of the principal-value term."""
        tr = self.trap
        a, b = traps.resonance_parts(tr, k)
        d = traps.detuned_part(tr, j, k)
        return -self._prefactor(j) / np.pi * tr.velocity(k) * d * b / (a * a + b * b)

    def asymptotic_amplitude(self, j, k):
        """Infinite-time amplitude on wave k: i g_n [A/(omega_k - omega_n)]/(A - iB)."""
        tr = self.trap
        a, b = traps.resonance_parts(tr, k)
        return 1j * self._prefactor(j) * traps.detuned_part(tr, j, k) / (a - 1j * b)

    def bound_term(self, j, k, t):
        """Bound-mode part of C_n(k, t)."""
        bs = self.bound
        return -1j * gamma_mu(bs, k) * bs.alpha(j) * np.exp(1j * bs.mu2 * t)

    # -- truncation

    def cutoff(self, t, tol, kind="pv"):
        """Truncation K for the semi-infinite k integrals.

        `pv`: principal-value term of C_n, integrand amplitude ~ lam^3/K^5.
        `pop`: population integrals, integrand ~ lam^2/K^4.
        Oscillation at t > 0 buys one extra power of K through integration by
        parts; the smaller of the two cutoffs is used.
        """
        tr = self.trap
        c = tr.dispersion
        lam = tr.lam
        phi2 = max(lv.weight for lv in self.levels[:1])
        if kind == "pv":
            amp = lam**3 * math.sqrt(phi2) / (2.0 * math.pi**1.5 * c * c)
            k_static = (amp / (4.0 * 0.1 * tol)) ** 0.25
            k_osc = (amp / (2.0 * c * max(t, 1e-300) * 0.1 * tol)) ** (1.0 / 6.0)
        else:
            amp = lam**2 * phi2 / (math.pi * c * c)
            k_static = (amp / (3.0 * 10.0 * tol)) ** (1.0 / 3.0)
            k_osc = (amp / (2.0 * c * max(t, 1e-300) * 0.1 * tol)) ** 0.2
        return k_static if c * k_static**2 * t <= 0.1 else min(k_osc, k_static)

    # -- time-dependent coefficient

    def c_coefficient(self, j, k, t, K=None, tol=1e-6, levels=None):
        """C_n(k, t), the amplitude of free wave k at time t for an atom started in level j.

        `j` may be an int or a sequence of levels (result has a leading level
        axis then).  `k` may be an array.  The principal-value integral is
        done on a fixed mesh by singularity subtraction, vectorised over all
        target k through a Cauchy matrix shared by the levels.
        """
        single = np.ndim(j) == 0
        js = [int(j)] if single else [int(x) for x in j]
        k = np.atleast_1d(np.asarray(k, dtype=float))
        if np.any(k <= 0):
            raise DomainError("c_coefficient needs k > 0")
        tr = self.trap
        c = tr.dispersion
        if K is None:
            k_top = max(float(k.max()), float(tr.resonance_k(max(js))))
            K = max(self.cutoff(t, tol, "pv"), 1.25 * k_top + 10.0)
        nodes, weights = continuum_rule(tr, K, t)
        phase_nodes = np.exp(-1j * c * nodes**2 * t)
        dens = np.stack([self.pv_density(jj, nodes) for jj in js]) * phase_nodes / c
        phase_k = np.exp(-1j * c * k**2 * t)
        dens_k = np.stack([self.pv_density(jj, k) for jj in js]) * phase_k / c

        pv = np.empty((len(js), k.size), dtype=complex)
        chunk = max(1, int(4_000_000 // nodes.size))
        for start in range(0, k.size, chunk):
            kk = k[start:start + chunk]
            with np.errstate(divide="ignore", invalid="ignore"):
                cauchy = weights[None, :] / ((nodes[None, :] - kk[:, None]) * (nodes[None, :] + kk[:, None]))
            hit = ~np.isfinite(cauchy)
            cauchy[hit] = 0.0
            s1 = dens @ cauchy.T
            s0 = cauchy.sum(axis=1)
            log_term = np.log((K - kk) / (K + kk)) / (2.0 * kk)
            pv[:, start:start + chunk] = s1 - dens_k[:, start:start + chunk] * (s0 - log_term)
        out = np.empty_like(pv)
        for row, jj in enumerate(js):
            on_shell = self.delta_part(jj, k) * phase_k
            out[row] = 1j * (on_shell + pv[row]) + self.bound_term(jj, k, t)
        return out[0] if single else out


def alpha_n_cont(cc, j, k):
    """alpha_n(k) of level j; finite across the bare resonance."""
    return cc.alpha(j, k)


def c_coefficient(cc, j, k, t, K=None, tol=1e-6):
    """C_n(k, t); see ContinuumCoeffs.c_coefficient."""
    return cc.c_coefficient(j, k, t, K=K, tol=tol)


def per_level_unitarity(cc, j, tol=1e-6):
    """Integral of alpha_n(k)^2 over k > 0 plus alpha_mu,n^2 (should be 1)."""
    from .dynamics import continuum_overlap

    return float(continuum_overlap(cc, j, 0.0, tol).real) + cc.bound.alpha(j) ** 2

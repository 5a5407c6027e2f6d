"""Quadrature and root-finding kernels.

* `integrate_adaptive`: globally adaptive Gauss-Kronrod (7/15) bisection,
  vectorised over panels so the integrand is called on whole batches of nodes.
* `integrate_pv`: principal value of g(k)/(k^2 - p^2) by singularity subtraction.
* `integrate_fresnel_pole`: half-line Fresnel integral with a simple pole,
  rotated onto a steepest-descent ray through the saddle point.
* `find_root_bracketed`: Brent's method (bisection safeguarded secant and
  inverse quadratic steps).
* `panel_rule`: composite Gauss-Legendre nodes for fixed-grid work.

Integrands take a 1-d array of abscissae and return an array whose first axis
matches it; trailing axes are allowed and integrated independently.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BracketError, ConvergenceError, DomainError

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# 15 Kronrod nodes on [-1, 1] with both weight sets laid out to match.
_NODES = np.concatenate((-_XGK[:-1], [0.0], _XGK[-2::-1]))
_W_KRONROD = np.concatenate((_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]))
_W_GAUSS = np.zeros(15)
_W_GAUSS[1:7:2] = _WG[:3]
_W_GAUSS[7] = _WG[3]
_W_GAUSS[9:14:2] = _WG[2::-1]

DEFAULT_MAX_PANELS = 2**20


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    evaluations: int


def _panel_sums(f, lo, hi):
    """Kronrod and Gauss estimates on each panel [lo[i], hi[i]]."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = (mid[:, None] + half[:, None] * _NODES[None, :]).ravel()
    fx = np.asarray(f(x))
    fx = fx.reshape((lo.size, 15) + fx.shape[1:])
    shape = (-1, 15) + (1,) * (fx.ndim - 2)
    scale = half.reshape((-1,) + (1,) * (fx.ndim - 2))
    kron = (fx * _W_KRONROD.reshape(shape)).sum(axis=1) * scale
    gauss = (fx * _W_GAUSS.reshape(shape)).sum(axis=1) * scale
    err = np.abs(kron - gauss)
    if err.ndim > 1:
        err = err.reshape(lo.size, -1).max(axis=1)
    return kron, err


def integrate_adaptive(f, a, b, tol=1e-10, breakpoints=None, max_panels=DEFAULT_MAX_PANELS):
    """Integrate f over [a, b] to an absolute error estimate <= tol.

    `breakpoints` seed the initial partition, which helps when the caller
    knows where the integrand has narrow features.
    """
    if not a < b:
        raise DomainError("integrate_adaptive needs a < b")
    if not tol > 0:
        raise DomainError("integrate_adaptive needs tol > 0")
    edges = [a, b]
    if breakpoints is not None:
        inner = [p for p in np.asarray(breakpoints, dtype=float).ravel() if a < p < b]
        edges = sorted(set([a, b] + inner))
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[:-1], edges[1:]
    value, err = _panel_sums(f, lo, hi)
    evaluations = 15 * lo.size
    done_value = 0.0
    done_err = 0.0
    while True:
        total_err = done_err + err.sum()
        magnitude = np.abs(done_value + value.sum(axis=0)).max() if np.ndim(value) > 1 else abs(done_value + value.sum())
        floor = 50.0 * np.finfo(float).eps * max(magnitude, 1e-300)
        if total_err <= max(tol, floor):
            break
        if lo.size + 1 > max_panels or evaluations > 15 * max_panels:
            raise ConvergenceError(
                "integrate_adaptive", "panel cap reached", a=a, b=b, tol=tol, error=float(total_err)
            )
        # split every panel carrying more than its share of the budget;
        # panels already at the resolution limit are frozen
        share = max(tol, floor) / max(lo.size, 1)
        split = err > share
        tiny = (hi - lo) < 64.0 * np.finfo(float).eps * np.maximum(np.abs(lo), np.abs(hi))
        frozen = split & tiny
        if np.any(frozen):
            done_value = done_value + value[frozen].sum(axis=0)
            done_err += err[frozen].sum()
        split &= ~tiny
        keep = ~split & ~frozen
        if not np.any(split):
            if done_err + err[keep].sum() > max(tol, floor):
                raise ConvergenceError(
                    "integrate_adaptive", "cannot subdivide further", a=a, b=b, tol=tol,
                    error=float(done_err + err[keep].sum()),
                )
            value, err, lo, hi = value[keep], err[keep], lo[keep], hi[keep]
            break
        mid = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate((lo[split], mid))
        new_hi = np.concatenate((mid, hi[split]))
        new_value, new_err = _panel_sums(f, new_lo, new_hi)
        evaluations += 15 * new_lo.size
        value = np.concatenate((value[keep], new_value))
        err = np.concatenate((err[keep], new_err))
        lo = np.concatenate((lo[keep], new_lo))
        hi = np.concatenate((hi[keep], new_hi))
    total = done_value + value.sum(axis=0)
    return QuadResult(total, float(done_err + err.sum()), evaluations)


def integrate_pv(g, pole, a, b, tol=1e-10, breakpoints=None):
    """Principal value of the integral of g(k)/(k^2 - pole^2) over [a, b].

    The subtracted integrand [g(k) - g(pole)]/(k^2 - pole^2) is regular and is
    handed to `integrate_adaptive`; the removed piece integrates in closed form.
    """
    if not (a < pole < b):
        raise DomainError("integrate_pv needs a < pole < b")
    if pole <= 0 or a <= -pole:
        raise DomainError("integrate_pv needs pole > 0 and a > -pole")
    width = b - a
    if min(pole - a, b - pole) < 1e-14 * max(width, abs(pole)):
        raise DomainError("integrate_pv: pole on the interval boundary")
    g_pole = np.asarray(g(np.array([pole])))[0]

    def regular(k):
        gk = np.asarray(g(k))
        den = (k - pole) * (k + pole)
        den = den.reshape((-1,) + (1,) * (gk.ndim - 1))
        return (gk - g_pole) / den

    cuts = [pole] if breakpoints is None else np.concatenate(([pole], np.ravel(breakpoints)))
    res = integrate_adaptive(regular, a, b, tol, breakpoints=cuts)
    log_term = math.log(abs((b - pole) * (a + pole) / ((b + pole) * (pole - a)))) / (2.0 * pole)
    return QuadResult(res.value + g_pole * log_term, res.error, res.evaluations + 1)


def integrate_fresnel_pole(pole, phase_b, tau, tol=1e-10):
    """Integral over y in [0, inf) of exp(-i tau y^2 + i b y)/(y - pole).

    The real half-line is deformed into the segment [0, y_s] followed by the
    ray y_s + exp(-i pi/4) u, where y_s = max(0, b/(2 tau)) is the saddle of
    the phase.  On the ray the integrand is a Gaussian in u in both cases
    (b >= 0: pure exp(-tau u^2); b < 0: an extra decaying exponential), so no
    exponentially large intermediate values appear.  The pole's residue is
    added when it lies in the wedge swept between the real axis and the ray.
    """
    pole = complex(pole)
    if not pole.imag < 0:
        raise DomainError("integrate_fresnel_pole needs Im(pole) < 0")
    if not tau > 0:
        raise DomainError("integrate_fresnel_pole needs tau > 0")
    b = float(phase_b)
    y_s = max(0.0, b / (2.0 * tau))
    rot = complex(math.sqrt(0.5), -math.sqrt(0.5))
    lin = b - 2.0 * tau * y_s  # zero when the saddle is on the positive axis
    base_phase = -tau * y_s * y_s + b * y_s

    total = 0.0 + 0.0j
    evaluations = 0
    if y_s > 0:
        def segment(y):
            return np.exp(1j * (b * y - tau * y * y)) / (y - pole)

        cuts = np.linspace(0.0, y_s, 2 + int(min(1e5, y_s * max(abs(b), 1.0) / 2.0)))
        res = integrate_adaptive(segment, 0.0, y_s, 0.5 * tol, breakpoints=cuts)
        total += res.value
        evaluations += res.evaluations

    # ray length where the Gaussian is below tol relative to its start
    u_max = math.sqrt((math.log(1.0 / tol) + 20.0) / tau)

    def ray(u):
        y = y_s + rot * u
        expo = 1j * base_phase - tau * u * u + 1j * rot * lin * u
        return np.exp(expo) * rot / (y - pole)

    # put a breakpoint where the ray passes closest to the pole
    offset = pole - y_s
    closest = (offset * rot.conjugate()).real
    cuts = np.linspace(0.0, u_max, 17)
    if 0 < closest < u_max:
        cuts = np.sort(np.append(cuts, closest))
    res = integrate_adaptive(ray, 0.0, u_max, 0.5 * tol, breakpoints=cuts)
    total += res.value
    evaluations += res.evaluations

    angle = math.atan2(offset.imag, offset.real)
    if -math.pi / 4 < angle < 0:
        total += -2j * math.pi * np.exp(-1j * tau * pole * pole + 1j * b * pole)
    return complex(total)


def find_root_bracketed(f, lo, hi, tol=1e-12, max_iter=200):
    """Root of a continuous f in [lo, hi] with f(lo) f(hi) <= 0 (Brent's method)."""
    a, b = float(lo), float(hi)
    fa, fb = float(f(a)), float(f(b))
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise BracketError(f"no sign change on [{lo}, {hi}]")
    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if fb * fc > 0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * np.finfo(float).eps * abs(b) + 0.5 * tol
        half = 0.5 * (c - b)
        if abs(half) <= tol1 or fb == 0.0:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * half * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * half * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * half * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = half
        else:
            d = e = half
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, half)
        fb = float(f(b))
    raise ConvergenceError("find_root_bracketed", "iteration cap reached", lo=lo, hi=hi)


def gauss_legendre(order):
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    return np.polynomial.legendre.leggauss(order)


def panel_rule(edges, order=16):
    """Composite Gauss-Legendre rule on consecutive panels [edges[i], edges[i+1]]."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights

"""Numerical ground truth: quadrature and finite differences.

Nothing here knows about the residue/Taylor machinery used elsewhere; wave
functions are treated as black-box callables (plus a little metadata: root
positions, decay exponent, period). Fourier integrals over the real line are
split into two semi-axes and handed to QUADPACK's Fourier-weight routine,
which extrapolates over oscillation cycles; that replaces naive subdivision
at the oscillation zeros, which cannot cope with slowly decaying tails.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import QuadratureFailure, SingularPoint

_HALF_PI = math.pi / 2
_SQRT_2PI = math.sqrt(2 * math.pi)


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    est_error: float
    evaluations: int


class _Counted:
    """Wrap a callable, counting scalar evaluations."""

    def __init__(self, func):
        self.func = func
        self.count = 0

    def __call__(self, x):
        self.count += 1
        return self.func(x)


def _quad(func, a, b, *, points=None, epsabs=1.49e-8, epsrel=1.49e-8, limit=250):
    out = integrate.quad(
        func, a, b, points=points, epsabs=epsabs, epsrel=epsrel, limit=limit,
        full_output=1,
    )
    ok = len(out) < 4
    return out[0], out[1], ok


def _qawf(func, omega, kind, epsabs):
    # integral of func(x) * cos/sin(omega*x) over [0, inf), omega > 0
    out = integrate.quad(
        func, 0.0, np.inf, weight=kind, wvar=omega, epsabs=epsabs,
        limit=200, limlst=200, maxp1=100, full_output=1,
    )
    ok = len(out) < 4
    return out[0], out[1], ok


def _semiaxis_fourier(g, omega, epsabs):
    """integral of g(x) * exp(i*omega*x) over [0, inf) for real omega != 0."""
    w, s = abs(omega), math.copysign(1.0, omega)
    gr = lambda x: g(x).real
    gi = lambda x: g(x).imag
    rc, e1, ok1 = _qawf(gr, w, "cos", epsabs)
    rs, e2, ok2 = _qawf(gr, w, "sin", epsabs)
    ic, e3, ok3 = _qawf(gi, w, "cos", epsabs)
    is_, e4, ok4 = _qawf(gi, w, "sin", epsabs)
    value = (rc - s * is_) + 1j * (ic + s * rs)
    return value, e1 + e2 + e3 + e4, ok1 and ok2 and ok3 and ok4


def _tan_mapped_line_integral(g, real_breakpoints, epsabs):
    """integral of complex g over the real line via x = tan(theta)."""
    pts = sorted({math.atan(b) for b in real_breakpoints})

    def re_part(t):
        x = math.tan(t)
        return g(x).real * (1.0 + x * x)

    def im_part(t):
        x = math.tan(t)
        return g(x).imag * (1.0 + x * x)

    vr, er, ok1 = _quad(re_part, -_HALF_PI, _HALF_PI, points=pts, epsabs=epsabs, epsrel=1e-11)
    vi, ei, ok2 = _quad(im_part, -_HALF_PI, _HALF_PI, points=pts, epsabs=epsabs, epsrel=1e-11)
    return vr + 1j * vi, er + ei, ok1 and ok2


def fourier_quadrature(wf, p: float, tol: float = 1e-8) -> QuadratureResult:
    """(2*pi)^(-1/2) * integral psi(x) exp(-i p x) dx, by brute-force quadrature.

    For decay exponent 1 the transform at p = 0 exists only as a principal
    value; that case subtracts the known odd asymptote x/(x^2+1) (whose
    symmetric integral vanishes) and integrates the absolutely convergent
    remainder.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    counted = _Counted(wf)
    tol_raw = tol * _SQRT_2PI
    breaks = [complex(r).real for r in wf.root_positions]

    if p == 0:
        if wf.decay_exponent == 1:
            asym = wf.asymptotic_coefficient

            def g(x):
                return counted(x) - asym * x / (x * x + 1.0)

            value, err, ok = _tan_mapped_line_integral(g, breaks + [0.0], tol_raw / 4)
        else:
            value, err, ok = _tan_mapped_line_integral(counted, breaks, tol_raw / 4)
    else:
        # split at the origin; each side is a semi-axis Fourier integral
        right, e1, ok1 = _semiaxis_fourier(counted, -p, tol_raw / 8)
        left, e2, ok2 = _semiaxis_fourier(lambda x: counted(-x), p, tol_raw / 8)
        value, err, ok = right + left, e1 + e2, ok1 and ok2

    if err > tol_raw and not ok:
        raise QuadratureFailure(
            f"Fourier quadrature at p={p} reached error {err:.3e} (target {tol_raw:.3e})"
        )
    return QuadratureResult(value / _SQRT_2PI, err / _SQRT_2PI, counted.count)


def phase_gradient_fd(wf, x: float, h: float = 1e-5) -> float:
    """Centered finite difference of arg(psi) with +-pi branch unwrapping.

    Callers must keep |k|*h well below pi/4: a wrapped difference close to
    pi signals a genuine phase jump (a zero between the sample points) and
    raises SingularPoint rather than returning a garbage slope.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    vp = complex(wf(x + h))
    vm = complex(wf(x - h))
    if abs(vp) == 0.0 or abs(vm) == 0.0:
        raise SingularPoint(f"wave function vanishes within h of x={x}")
    d = cmath.phase(vp) - cmath.phase(vm)
    if d > math.pi:
        d -= 2 * math.pi
    elif d < -math.pi:
        d += 2 * math.pi
    if abs(d) > 0.75 * math.pi:
        raise SingularPoint(
            f"phase jump of {d:.3f} rad across x={x}; likely a zero between samples"
        )
    return d / (2 * h)


def norm_quadrature(wf, domain: str = "line", tol: float = 1e-10) -> QuadratureResult:
    """integral of |psi|^2 over the line (tan-substituted adaptive quadrature)
    or over one period (trapezoid sums with doubling)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if domain == "line":
        counted = _Counted(wf)

        def g(t):
            x = math.tan(t)
            v = counted(x)
            return (v.real * v.real + v.imag * v.imag) * (1.0 + x * x)

        pts = sorted({math.atan(complex(r).real) for r in wf.root_positions})
        val, err, ok = _quad(g, -_HALF_PI, _HALF_PI, points=pts, epsabs=0.0, epsrel=0.1 * tol)
        if err > tol * abs(val):
            raise QuadratureFailure(
                f"norm quadrature error {err:.3e} exceeds {tol:.1e} relative"
            )
        return QuadratureResult(complex(val), err, counted.count)

    if domain == "ring":
        L = wf.period
        m = 256
        prev = None
        evals = 0
        while m <= (1 << 20):
            x = np.arange(m) * (L / m) - L / 2
            v = wf(x)
            evals += m
            total = float(np.sum(v.real**2 + v.imag**2)) * (L / m)
            if prev is not None and abs(total - prev) < tol * max(1.0, abs(total)):
                return QuadratureResult(complex(total), abs(total - prev), evals)
            prev = total
            m *= 2
        raise QuadratureFailure("period trapezoid did not converge before the cap")

    raise ValueError(f"unknown domain {domain!r}")

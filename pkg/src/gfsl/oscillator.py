"""Harmonic-oscillator side: weak transforms on polynomial-times-Gaussian data.

Functions u(x) = P(x) exp(-w x^2 / 2) with Re w > 0 are closed under
multiplication by x, differentiation, and the Euler operator, so the two
weak transforms (derivatives at 0, and x-power moments) are evaluated by
exact coefficient recurrences; nothing here is a finite difference.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass
class GaussPolyFunction:
    """P(x) exp(-width x^2/2); width is the cot-beta parameter, Re width > 0."""

    poly: np.ndarray
    width: complex

    def __post_init__(self):
        self.poly = np.asarray(self.poly, dtype=complex)
        self.width = complex(self.width)
        if self.poly.ndim != 1 or self.poly.size == 0:
            raise DomainError("GaussPolyFunction: poly must be a 1-d nonempty array")
        if self.width.real <= 0:
            raise DomainError(
                f"GaussPolyFunction: Re(width) = {self.width.real} must be > 0")

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        return np.polyval(self.poly[::-1], x) * np.exp(-0.5 * self.width * x * x)


def x_times(u):
    """x * u(x) as a GaussPolyFunction."""
    p = np.concatenate([[0.0 + 0.0j], u.poly])
    return GaussPolyFunction(p, u.width)


def ddx(u):
    """d/dx of u(x): (P' - w x P) exp(-w x^2/2)."""
    n = u.poly.size
    dp = u.poly[1:] * np.arange(1, n)
    p = np.zeros(n + 1, dtype=complex)
    p[: max(n - 1, 0)] = dp
    p[1:] -= u.width * u.poly
    return GaussPolyFunction(p, u.width)


def euler_half(u):
    """(x d/dx + 1/2) u."""
    v = x_times(ddx(u))
    n = max(v.poly.size, u.poly.size)
    p = np.zeros(n, dtype=complex)
    p[: v.poly.size] += v.poly
    p[: u.poly.size] += 0.5 * u.poly
    return GaussPolyFunction(p, u.width)


def _taylor_at_zero(u, n_max):
    # Taylor coefficients of u: convolution of P with the Gaussian series.
    c = np.zeros(n_max + 1, dtype=complex)
    g = np.zeros(n_max + 1, dtype=complex)
    half = -0.5 * u.width
    term = 1.0 + 0.0j
    for j in range(0, n_max + 1, 2):
        g[j] = term
        term *= half / (j // 2 + 1)
    for m, pm in enumerate(u.poly[: n_max + 1]):
        if pm != 0:
            c[m:] += pm * g[: n_max + 1 - m]
    return c


def t_plus(u, n_max):
    """Entries u^(n)(0)/sqrt(n!) for n = 0..n_max."""
    c = _taylor_at_zero(u, n_max)
    # u^(n)(0)/sqrt(n!) = sqrt(n!) * c_n
    fac = np.exp(0.5 * np.array([math.lgamma(n + 1) for n in range(n_max + 1)]))
    return fac * c


def t_minus(u, n_max):
    """Entries (1/sqrt(n!)) * integral of x^n u(x) dx for n = 0..n_max."""
    deg = u.poly.size - 1
    top = n_max + deg
    mom = np.zeros(top + 1, dtype=complex)
    mom[0] = cmath.sqrt(2.0 * math.pi / u.width)
    for j in range(0, top - 1, 2):
        mom[j + 2] = (j + 1) / u.width * mom[j]
    out = np.zeros(n_max + 1, dtype=complex)
    for n in range(n_max + 1):
        out[n] = np.dot(u.poly, mom[n : n + deg + 1])
        out[n] *= math.exp(-0.5 * math.lgamma(n + 1))
    return out


def gaussian_flow(beta, alpha):
    """Flow of the quadratic generator on Gaussian widths.

    Maps the width parameter beta to beta + alpha and returns the
    accompanying prefactor (sin(beta)/sin(beta+alpha))^(1/2) on the
    continuous branch.  Both endpoints must sit in the strip
    0 < Re < pi/2.
    """
    beta = complex(beta)
    out = beta + alpha
    for name, val in (("beta", beta), ("beta+alpha", out)):
        if not (0.0 < val.real < math.pi / 2.0):
            raise DomainError(
                f"gaussian_flow: {name} = {val} outside the strip (0, pi/2)")
    pref = cmath.sqrt(cmath.sin(beta) / cmath.sin(out))
    return out, pref


def ladder_matrices(n_max):
    """Dense A, a+, a- on the first n_max+1 basis vectors of l2(N)."""
    n = np.arange(n_max + 1)
    a_num = np.diag(n.astype(float))
    a_plus = np.diag(np.sqrt(n[1:].astype(float)), -1)
    a_minus = np.diag(np.sqrt(n[1:].astype(float)), 1)
    return a_num, a_plus, a_minus

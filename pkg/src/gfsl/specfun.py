"""Complex special-function kernel.

Everything downstream (branch transforms, Harish-Chandra coefficients,
trace identities) reduces to four primitives implemented here: the
principal-branch complex log-Gamma, Gamma ratios with an explicit
pole-limit mode, Taylor coefficients of (1+ix)^a (1-ix)^b, the
regularized line integral of the same two-factor function, and the
conical Legendre function by periodic-trapezoid quadrature.
"""

import cmath
import math

import numpy as np

from .errors import AccuracyError, DomainError, PoleError

# Lanczos, g = 7, 9 coefficients.  Standard double-precision set,
# ~13 significant digits on the right half-plane.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_LOG_SQRT_TWO_PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)
_LOG_2 = math.log(2.0)


def is_gamma_pole(z, tol=0.0):
    """True if z is a non-positive integer (a pole of Gamma), within tol."""
    z = complex(z)
    if abs(z.imag) > tol:
        return False
    r = round(z.real)
    return r <= 0 and abs(z.real - r) <= tol


def _log_gamma_right(z):
    # Lanczos on Re z >= 0.5; analytic there, hence the principal branch.
    w = z - 1.0
    series = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:], start=1):
        series += c / (w + i)
    t = w + _LANCZOS_G + 0.5
    return _LOG_SQRT_TWO_PI + (w + 0.5) * cmath.log(t) - t + cmath.log(series)


def _log_sin_pi_upper(z):
    # Continuous branch of log sin(pi z) for Im z >= 0; the combination
    # below keeps log Gamma principal across the reflection.
    # sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z}),  |e^{2 i pi z}| <= 1.
    return (-_LOG_2 + 1j * math.pi / 2.0) - 1j * math.pi * z \
        + cmath.log(1.0 - cmath.exp(2j * math.pi * z))


def log_gamma(z):
    """Principal-branch log Gamma(z); raises PoleError at non-positive integers."""
    z = complex(z)
    if is_gamma_pole(z):
        raise PoleError(f"log_gamma: pole at z = {z}")
    if z.real >= 0.5:
        return _log_gamma_right(z)
    if z.imag < 0.0:
        return log_gamma(z.conjugate()).conjugate()
    # Im z >= 0, Re z < 0.5: reflection with the continuous log-sin.
    return _LOG_PI - _log_sin_pi_upper(z) - _log_gamma_right(1.0 - z)


def gamma(z):
    """Gamma(z) through log_gamma; PoleError at poles."""
    return cmath.exp(log_gamma(z))


def rgamma(z):
    """1/Gamma(z); zero at the poles of Gamma, never raises."""
    z = complex(z)
    if is_gamma_pole(z):
        return 0.0 + 0.0j
    return cmath.exp(-log_gamma(z))


def gamma_ratio(z, w, pole_limit=False):
    """Gamma(z)/Gamma(w) via log differences.

    With pole_limit=True both arguments must be poles z = -m, w = -n and
    the limiting value (-1)^(m-n) n!/m! along a common approach is
    returned; this is the rule that turns Gamma(-n-2*i*lam)/Gamma(-2*i*lam)
    into (-1)^n/n! at lam = 0.
    """
    z = complex(z)
    w = complex(w)
    pz, pw = is_gamma_pole(z), is_gamma_pole(w)
    if pole_limit:
        if not (pz and pw):
            raise DomainError(
                "gamma_ratio: pole_limit requires both arguments at poles, "
                f"got z = {z}, w = {w}")
        m = -round(z.real)
        n = -round(w.real)
        sign = -1.0 if (m - n) % 2 else 1.0
        return complex(sign * math.exp(math.lgamma(n + 1) - math.lgamma(m + 1)))
    if z == w:
        return 1.0 + 0.0j
    if pz and pw:
        raise DomainError(
            "gamma_ratio: both arguments are poles; pass pole_limit=True "
            "to take the limit")
    if pz:
        raise PoleError(f"gamma_ratio: numerator pole at z = {z}")
    if pw:
        return 0.0 + 0.0j
    return cmath.exp(log_gamma(z) - log_gamma(w))


def taylor_two_factor(alpha, beta, n_max):
    """Taylor coefficients a_n of (1+ix)^alpha (1-ix)^beta, n = 0..n_max.

    Uses the exact two-term recurrence obtained from
    (1+x^2) f' = (i(alpha-beta) + (alpha+beta) x) f:
        (n+1) a_{n+1} = i(alpha-beta) a_n + (alpha+beta-(n-1)) a_{n-1}.
    Both fundamental solutions are polynomially bounded, so the forward
    recurrence is stable.
    """
    if n_max < 0:
        raise DomainError("taylor_two_factor: n_max must be >= 0")
    alpha = complex(alpha)
    beta = complex(beta)
    a = np.zeros(n_max + 1, dtype=complex)
    a[0] = 1.0
    if n_max >= 1:
        a[1] = 1j * (alpha - beta)
    d = 1j * (alpha - beta)
    s = alpha + beta
    for n in range(1, n_max):
        a[n + 1] = (d * a[n] + (s - (n - 1)) * a[n - 1]) / (n + 1)
    return a


def log_beta_line(alpha, beta):
    """log of the regularized integral of (1+ix)^alpha (1-ix)^beta over R.

    Value: pi 2^(alpha+beta+2) Gamma(-alpha-beta-1) / (Gamma(-alpha) Gamma(-beta)).
    Raises PoleError when Gamma(-alpha-beta-1) has a pole not cancelled by a
    denominator pole, and DomainError when the result is identically zero
    (use beta_line_integral for the value in that case).
    """
    alpha = complex(alpha)
    beta = complex(beta)
    c = -alpha - beta - 1.0
    if is_gamma_pole(c):
        raise PoleError(
            f"beta line integral: Gamma pole at -alpha-beta-1 = {c}")
    if is_gamma_pole(-alpha) or is_gamma_pole(-beta):
        raise DomainError("log_beta_line: value is zero (denominator pole)")
    return (_LOG_PI + (alpha + beta + 2.0) * _LOG_2 + log_gamma(c)
            - log_gamma(-alpha) - log_gamma(-beta))


def beta_line_integral(alpha, beta):
    """Regularized value of the line integral of (1+ix)^alpha (1-ix)^beta.

    This is the meromorphic continuation of the absolutely convergent case
    Re(alpha+beta) < -1.  Pole configurations where the numerator Gamma pole
    is cancelled by a denominator pole are resolved by the limit rule.
    """
    alpha = complex(alpha)
    beta = complex(beta)
    c = -alpha - beta - 1.0
    pa = is_gamma_pole(-alpha)
    pb = is_gamma_pole(-beta)
    if is_gamma_pole(c):
        if pa:
            r = gamma_ratio(c, -alpha, pole_limit=True)
            return (math.pi * cmath.exp((alpha + beta + 2.0) * _LOG_2)
                    * r * rgamma(-beta))
        if pb:
            r = gamma_ratio(c, -beta, pole_limit=True)
            return (math.pi * cmath.exp((alpha + beta + 2.0) * _LOG_2)
                    * r * rgamma(-alpha))
        raise PoleError(
            f"beta_line_integral: non-continuable pole at -alpha-beta-1 = {c}")
    if pa or pb:
        return 0.0 + 0.0j
    return cmath.exp(log_beta_line(alpha, beta))


def legendre_conical(lam, t, tol=1e-12, max_nodes=1 << 21):
    """P_{-1/2 + i lam}(cosh t) for t >= 0, real lam.

    Periodic-trapezoid quadrature of the circle integral with node doubling
    until the relative change drops below tol.  The exact value is real;
    doubling continues until the imaginary residue also falls below 1e-12,
    after which it is discarded.
    """
    if t < 0:
        raise DomainError("legendre_conical: t must be >= 0")
    if t == 0.0:
        return 1.0
    b = -0.5 + 1j * lam
    n = 16
    prev = None
    val = None
    while n <= max_nodes:
        theta = 2.0 * math.pi * np.arange(n) / n
        # cosh t + sinh t cos(theta), grouped to avoid the cancellation at
        # theta = pi that would cost a factor e^{2t} in precision
        base = math.exp(-t) + 2.0 * math.sinh(t) * np.cos(theta / 2.0) ** 2
        nodes = np.exp(b * np.log(base))
        if n >= 1 << 14:
            # exactly-rounded mean: plain summation wanders at the level of
            # eps * e^{t/2}, above tight tolerances once t is large
            val = complex(math.fsum(nodes.real) / n, math.fsum(nodes.imag) / n)
        else:
            val = complex(np.mean(nodes))
        if (prev is not None
                and abs(val - prev) <= tol * max(1.0, abs(val))
                and abs(val.imag) <= 1e-12):
            break
        prev = val
        n *= 2
    else:
        raise AccuracyError(
            f"legendre_conical: no convergence at tol={tol} with "
            f"{max_nodes} nodes", achieved=abs(val - prev))
    if abs(val.imag) > 1e-12:
        raise AccuracyError(
            "legendre_conical: imaginary residue above 1e-12",
            achieved=abs(val.imag))
    return val.real


def logsumexp_signed(log_mag, phases):
    """Stable sum of terms phases[j] * exp(log_mag[j]).

    log_mag is real, phases are unit-modulus complex factors.  Returns
    (log_abs, phase) of the total, with phase = 0 when the sum vanishes.
    """
    log_mag = np.asarray(log_mag, dtype=float)
    phases = np.asarray(phases, dtype=complex)
    m = float(np.max(log_mag))
    if not np.isfinite(m):
        return -math.inf, 0.0 + 0.0j
    s = complex(np.sum(phases * np.exp(log_mag - m)))
    if s == 0:
        return -math.inf, 0.0 + 0.0j
    return m + math.log(abs(s)), s / abs(s)

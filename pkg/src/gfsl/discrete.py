"""One holomorphic discrete series: disk model, Cayley coefficients, traces.

The weighted Bergman basis is psi_k = binom(l+k-1, k)^(1/2) w^k.  The
algebraic Cayley transform carries the circle-mode ladder into the
resonance ladder -n - l/2; its forward/backward coefficient tables are
two-factor Taylor expansions with explicit constants, so the correlation
expansion needs no extra renormalization.  The anti-holomorphic series is
the entrywise complex conjugate throughout.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, DomainError
from .spherical import KBandedOperator
from .specfun import taylor_two_factor


@dataclass
class DiscreteParam:
    """Lowest K-type l (even, >= 2) and its Casimir value mu = -l(l-2)/4."""

    l: int

    def __post_init__(self):
        if self.l < 2 or self.l % 2:
            raise DomainError(f"DiscreteParam: l = {self.l} must be even and >= 2")

    @property
    def mu(self):
        return -0.25 * self.l * (self.l - 2)


def disk_basis(l, k):
    """Normalization binom(l+k-1, k)^(1/2) of the k-th disk basis monomial."""
    if k < 0:
        raise DomainError("disk_basis: k must be >= 0")
    return math.exp(0.5 * (math.lgamma(l + k) - math.lgamma(k + 1)
                           - math.lgamma(l)))


def build_disk_matrices(l, K):
    """Theta, N+, N-, X on the truncated disk basis 0 <= k <= K."""
    if K < 2:
        raise DomainError("build_disk_matrices: K must be >= 2")
    DiscreteParam(l)
    ks = np.arange(K + 1, dtype=float)
    c = np.sqrt((l + ks) * (ks + 1.0)).astype(complex)  # N+ psi_k = c_k psi_{k+1}
    zero = np.zeros(K + 1, dtype=complex)
    n_plus = KBandedOperator(0, K, zero.copy(), c.copy(), zero.copy())
    # N- psi_0 = 0, N- psi_{k} = -c_{k-1} psi_{k-1}
    sub = np.zeros(K + 1, dtype=complex)
    sub[1:] = -c[:-1]
    n_minus = KBandedOperator(0, K, zero.copy(), zero.copy(), sub)
    theta = KBandedOperator(0, K, (l + 2 * ks).astype(complex), zero.copy(),
                            zero.copy())
    x_op = KBandedOperator(0, K, zero.copy(), 0.5 * c, 0.5 * sub)
    return {"Theta": theta, "Nplus": n_plus, "Nminus": n_minus, "X": x_op}


@dataclass
class DiskCoeffTable:
    """Cayley coefficient tables for one holomorphic discrete series.

    forward[n, k]  : coefficient of psi_n in the inverse-Cayley image of psi_k,
                     0 <= n <= n_max, 0 <= k <= k_max.
    backward[k, n] : coefficient of psi_k in the forward-Cayley image of psi_n,
                     same index ranges transposed.
    """

    l: int
    n_max: int
    k_max: int
    forward: np.ndarray
    backward: np.ndarray


def cayley_coeffs(l, N, K):
    """Forward and backward Cayley tables with all constants included."""
    DiscreteParam(l)
    lb = np.array([math.lgamma(l + n) - math.lgamma(n + 1) - math.lgamma(l)
                   for n in range(max(N, K) + 1)])
    half = 0.5 * lb
    fwd = np.zeros((N + 1, K + 1), dtype=complex)
    cay_f = (1.0 + 1j) ** l
    for k in range(K + 1):
        a = taylor_two_factor(-l - k, k, N)
        const = cay_f * (-1.0) ** k * math.exp(half[k])
        fwd[:, k] = const * a * np.exp(-half[: N + 1])
    bwd = np.zeros((K + 1, N + 1), dtype=complex)
    cay_b = (1.0 - 1j) ** l
    im = np.array([(-1j) ** m for m in range(N + K + 2)])
    for n in range(N + 1):
        a = taylor_two_factor(n, -l - n, K)
        const = cay_b * math.exp(half[n])
        bwd[:, n] = const * a * im[n : n + K + 1] * np.exp(-half[: K + 1])
    return DiskCoeffTable(l, N, K, fwd, bwd)


def intertwine_residual_ds(l, table, ops):
    """Max relative residual of the Cayley intertwining identities.

    Model actions on the forward table:
        X:  -(n + l/2) f_{n,k}
        U:  sqrt(n) sqrt(n-1+l) f_{n-1,k}
        S:  -sqrt(n+l) sqrt(n+1) f_{n+1,k}
    U and S are assembled from N+-, N- and Theta on the disk side.
    """
    N, K = table.n_max, table.k_max
    npl, nmi, th = ops["Nplus"], ops["Nminus"], ops["Theta"]
    u_op = KBandedOperator(0, K, -0.5j * th.diag, -0.5j * npl.sup, 0.5j * nmi.sub)
    s_op = KBandedOperator(0, K, 0.5j * th.diag, -0.5j * npl.sup, 0.5j * nmi.sub)
    f = table.forward
    res = {"X": 0.0, "U": 0.0, "S": 0.0}

    def upd(name, lhs, rhs):
        lhs = lhs[1:-1]
        rhs = rhs[1:-1]
        scale = max(float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))), 1e-300)
        res[name] = max(res[name], float(np.max(np.abs(lhs - rhs))) / scale)

    for n in range(N + 1):
        upd("X", -(n + l / 2.0) * f[n], ops["X"].transform_row(f[n]))
        if n >= 1:
            lhs = math.sqrt(n) * math.sqrt(n - 1 + l) * f[n - 1]
            upd("U", lhs, u_op.transform_row(f[n]))
        if n <= N - 1:
            lhs = -math.sqrt(n + l) * math.sqrt(n + 1) * f[n + 1]
            upd("S", lhs, s_op.transform_row(f[n]))
    return res


def composition_identity(l, k_out, k_in):
    """Regularized composition sum_n backward[k_out,n] forward[n,k_in].

    The raw partial sums diverge: the n-th product equals (-1)^n times a
    polynomial in n of degree k_in + k_out + l - 1 (the basis-normalization
    square roots cancel between the two tables).  Its Abel limit is
    therefore the finite Euler sum
        sum_j (-1)^j (Delta^j c)(0) / 2^(j+1),
    which this evaluates; the result is delta_{k_out, k_in} in exact
    arithmetic.  The residual finite differences beyond the polynomial
    degree double as an audit that the tables have the claimed structure.
    """
    deg = k_in + k_out + l - 1
    n_pts = deg + 6
    tab = cayley_coeffs(l, n_pts, max(k_out, k_in))
    prod = tab.backward[k_out, : n_pts + 1] * tab.forward[: n_pts + 1, k_in]
    signs = np.where(np.arange(n_pts + 1) % 2 == 0, 1.0, -1.0)
    c = prod * signs
    scale = max(float(np.max(np.abs(c))), 1e-300)
    total = 0.0 + 0.0j
    d = c.copy()
    for j in range(deg + 1):
        total += (-1.0) ** j * d[0] / 2.0 ** (j + 1)
        d = np.diff(d)
    if float(np.max(np.abs(d[:3]))) > 1e-6 * scale * 2.0 ** deg:
        raise DomainError(
            "composition_identity: products are not polynomial times (-1)^n")
    return complex(total)


@dataclass
class CorrelationResultDS:
    value: complex
    tail_bound: float
    n_max: int


def correlation_ds(l, k_out, k_in, tau, N, tol=None, conjugate=False):
    """Resonance expansion of the disk matrix element of exp(tau X).

    value = sum_n exp(-tau (n + l/2)) backward[k_out, n] forward[n, k_in];
    conjugate=True returns the anti-holomorphic (mirror) series value.
    """
    if tau <= 0:
        raise DomainError("correlation_ds: tau must be > 0")
    tab = cayley_coeffs(l, N, max(k_out, k_in))
    n = np.arange(N + 1)
    prod = tab.backward[k_out, :] * tab.forward[:, k_in]
    value = complex(np.sum(np.exp(-tau * (n + l / 2.0)) * prod))
    power = k_in + k_out + l - 1
    last = slice(max(0, N - 4), N + 1)
    c_est = float(np.max(np.abs(prod[last]) / (1.0 + n[last]) ** power))
    tail = (c_est * math.exp(-tau * (N + 1 + l / 2.0))
            * (2.0 + N) ** power / (1.0 - math.exp(-tau)))
    if tol is not None and tail > tol:
        raise AccuracyError(
            f"correlation_ds: tail bound {tail:.3e} above requested {tol:.3e}",
            achieved=tail)
    if conjugate:
        value = value.conjugate()
    return CorrelationResultDS(value, tail, N)


def trace_ds(l, t, n_max=60):
    """Holomorphic flat trace e^{-tl/2}/(1-e^{-t}) and its resonance partials."""
    if t <= 0:
        raise DomainError("trace_ds: t must be > 0")
    DiscreteParam(l)
    flat = math.exp(-t * l / 2.0) / (1.0 - math.exp(-t))
    n = np.arange(n_max + 1)
    partial = np.cumsum(np.exp(-t * (n + l / 2.0)))
    tail_exact = np.exp(-t * (n + 1 + l / 2.0)) / (1.0 - math.exp(-t))
    return {"flat": flat, "spectral_partial": partial, "tail_exact": tail_exact}


def rr_multiplicity(genus, l):
    """Multiplicity of the discrete series with lowest K-type l on genus g."""
    if genus < 2:
        raise DomainError("rr_multiplicity: genus must be >= 2")
    DiscreteParam(l)
    if l == 2:
        return genus
    return (l - 1) * (genus - 1)

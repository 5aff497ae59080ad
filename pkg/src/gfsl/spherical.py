"""One spherical irreducible component at finite truncation.

Builds the tridiagonal generator matrices on the circle-mode basis, the
two branch-transform coefficient tables with their diagonal gauges, the
dual (inverse-transform) rows, the per-coefficient intertwining audits,
the threshold coalescence data with its 2x2 Jordan model, the correlation
expansion and the flat-vs-spectral trace identity.

Conventions.  The spectral parameter is lam with mu = lam^2 + 1/4 and
b_pm = -1/2 +- i lam; the complementary regime is the substitution
lam = i nu, 0 < nu < 1/2, everywhere in the same algebraic formulas.
Coefficient tables are indexed [n, k+K] for 0 <= n <= N, |k| <= K.
The dual table stores v[n, k] = <psi_k | T_branch^{-1} e_n>, which for
real lam is the complex conjugate of the weak dual coefficient; the
correlation expansion is sum over n, branch of
exp(tau z) * v[n, k_out] * s[n, k_in].
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import AccuracyError, ConsistencyError, DomainError, PoleError
from .specfun import log_beta_line, log_gamma, taylor_two_factor

_SQRT_PI = math.sqrt(math.pi)

PRINCIPAL = "principal"
COMPLEMENTARY = "complementary"
THRESHOLD = "threshold"

BRANCH_PLUS = "plus"
BRANCH_MINUS = "minus"
BRANCH_MINUS_RENORMALIZED = "minus_renormalized"


@dataclass
class SpectralParam:
    """Parameters of one spherical irreducible: mu, lam, branch exponents, regime."""

    mu: float
    lam: complex
    b_plus: complex
    b_minus: complex
    regime: str

    @classmethod
    def principal(cls, lam):
        if lam < 0:
            raise DomainError("principal: lam must be >= 0")
        lam = float(lam)
        return cls(lam * lam + 0.25, complex(lam),
                   -0.5 + 1j * lam, -0.5 - 1j * lam,
                   THRESHOLD if lam == 0.0 else PRINCIPAL)

    @classmethod
    def complementary(cls, nu):
        if not 0.0 < nu < 0.5:
            raise DomainError("complementary: nu must lie in (0, 1/2)")
        lam = 1j * nu
        return cls(0.25 - nu * nu, lam, -0.5 - nu, -0.5 + nu, COMPLEMENTARY)

    @classmethod
    def threshold(cls):
        return cls(0.25, 0.0 + 0.0j, -0.5 + 0.0j, -0.5 + 0.0j, THRESHOLD)

    @classmethod
    def from_mu(cls, mu):
        if mu <= 0:
            raise DomainError("from_mu: mu must be > 0")
        if mu >= 0.25:
            return cls.principal(math.sqrt(mu - 0.25))
        return cls.complementary(math.sqrt(0.25 - mu))

    def __post_init__(self):
        self.lam = complex(self.lam)
        if abs(self.b_plus * self.b_minus - self.mu) > 1e-14 * max(1.0, abs(self.mu)):
            raise ConsistencyError("SpectralParam: b+ * b- != mu")
        want = THRESHOLD if self.mu == 0.25 else (
            PRINCIPAL if self.mu > 0.25 else COMPLEMENTARY)
        if self.regime != want:
            raise ConsistencyError(
                f"SpectralParam: regime {self.regime} inconsistent with mu = {self.mu}")

    def branch_b(self, branch):
        return self.b_plus if branch == BRANCH_PLUS else self.b_minus

    def resonances(self, n_max):
        """z_{n,+}, z_{n,-} for n = 0..n_max as a (n_max+1, 2) array."""
        n = np.arange(n_max + 1)
        zp = -n - 0.5 + 1j * self.lam
        zm = -n - 0.5 - 1j * self.lam
        return np.stack([zp, zm], axis=1)


@dataclass
class KBandedOperator:
    """Tridiagonal operator on circle modes psi_k, k_min <= k <= k_max.

    diag[i], sup[i], sub[i] are the amplitudes coupling psi_k (k = k_min+i)
    to psi_k, psi_{k+1}, psi_{k-1} respectively.
    """

    k_min: int
    k_max: int
    diag: np.ndarray
    sup: np.ndarray
    sub: np.ndarray

    def index(self, k):
        if not self.k_min <= k <= self.k_max:
            raise DomainError(f"KBandedOperator: k = {k} outside band")
        return k - self.k_min

    def transform_row(self, row):
        """Given row_i = c_{n, k_min+i}, return sum_j O_{jk} c_{n,j} on interior k.

        Boundary columns (k = k_min, k_max) are returned as NaN since the
        truncation corrupts them.
        """
        row = np.asarray(row, dtype=complex)
        out = np.full_like(row, np.nan + 0.0j)
        out[1:-1] = (self.diag[1:-1] * row[1:-1]
                     + self.sup[1:-1] * row[2:]
                     + self.sub[1:-1] * row[:-2])
        return out

    def as_dense(self):
        """Matrix M[j, k] acting on coefficient vectors of functions."""
        m = self.k_max - self.k_min + 1
        out = np.zeros((m, m), dtype=complex)
        idx = np.arange(m)
        out[idx, idx] = self.diag
        out[idx[1:], idx[:-1]] = self.sup[:-1]
        out[idx[:-1], idx[1:]] = self.sub[1:]
        return out


def build_k_matrices(p, K):
    """Tridiagonal matrices of X, U, S, Theta, N+, N- on |k| <= K."""
    if K < 2:
        raise DomainError("build_k_matrices: K must be >= 2")
    lam = p.lam
    ks = np.arange(-K, K + 1, dtype=float)
    zero = np.zeros_like(ks, dtype=complex)
    # raising/lowering amplitudes of N+ and N-
    np_raise = 1j * (ks + 0.5 - 1j * lam)
    nm_lower = 1j * (ks - 0.5 + 1j * lam)
    # U = (i/2)(N- - N+ - Theta), S = (i/2)(N- - N+ + Theta)
    us_raise = -0.5j * np_raise
    us_lower = 0.5j * nm_lower
    return {
        "X": KBandedOperator(-K, K, zero.copy(), 0.5 * np_raise, 0.5 * nm_lower),
        "U": KBandedOperator(-K, K, -1j * ks, us_raise.copy(), us_lower.copy()),
        "S": KBandedOperator(-K, K, 1j * ks, us_raise.copy(), us_lower.copy()),
        "Theta": KBandedOperator(-K, K, (2 * ks).astype(complex), zero.copy(),
                                 zero.copy()),
        "Nplus": KBandedOperator(-K, K, zero.copy(), np_raise, zero.copy()),
        "Nminus": KBandedOperator(-K, K, zero.copy(), zero.copy(), nm_lower),
    }


def gauge_log(p, branch, n_max):
    """log t_n for t_n = prod_{j<n} (-2 b_branch + j)^{-+1/2}, principal factors.

    The factors -2b +- j all have real part >= 1 (- 2 nu > 0 in the
    complementary regime), so per-factor principal powers give the
    continuous branch with t_0 = 1.
    """
    b = p.branch_b(branch if branch != BRANCH_MINUS_RENORMALIZED else BRANCH_MINUS)
    c = -2.0 * b
    if is_nonpositive_int(c):
        raise DomainError(f"gauge: -2b = {c} hits a branch point")
    expo = -0.5 if branch == BRANCH_PLUS else 0.5
    logs = np.zeros(n_max + 1, dtype=complex)
    acc = 0.0 + 0.0j
    for n in range(n_max):
        acc += expo * cmath.log(c + n)
        logs[n + 1] = acc
    return logs


def is_nonpositive_int(z):
    z = complex(z)
    return abs(z.imag) == 0.0 and z.real <= 0 and z.real == round(z.real)


def gauge_sequence(p, branch, n_max):
    """The gauge sequence t_n itself (inf for the minus branch at very large n)."""
    with np.errstate(over="ignore"):
        return np.exp(gauge_log(p, branch, n_max))


@dataclass
class CoeffTable:
    """Branch-transform coefficients s[n, k+K] with their gauge, plus dual rows."""

    branch: str
    n_max: int
    k_max: int
    s: np.ndarray
    gauge_log: np.ndarray
    dual: np.ndarray | None = None

    @property
    def gauge(self):
        with np.errstate(over="ignore"):
            return np.exp(self.gauge_log)

    def entry(self, n, k):
        return self.s[n, k + self.k_max]

    def dual_entry(self, n, k):
        if self.dual is None:
            raise DomainError("CoeffTable: dual rows not built")
        return self.dual[n, k + self.k_max]


def _moment_seq(lam, k, n_max):
    """Regularized moments M_n = int x^n (1+ix)^(b+k) (1-ix)^(b-k) dx.

    Seeded by the beta line integral and advanced by the three-term
    recurrence (n+1+2 i lam) M_{n+1} = -2 i k M_n - n M_{n-1}, the moment
    form of (1+x^2) f' = (2ik + (2b) x) f.  Both fundamental solutions stay
    polynomially bounded, so forward recursion is stable.
    """
    b = -0.5 + 1j * lam
    lm0 = log_beta_line(b + k, b - k)
    m = np.zeros(n_max + 1, dtype=complex)
    m[0] = cmath.exp(lm0)
    if n_max >= 1:
        m[1] = -2j * k * m[0] / (1.0 + 2j * lam)
    for n in range(1, n_max):
        m[n + 1] = (-2j * k * m[n] - n * m[n - 1]) / (n + 1.0 + 2j * lam)
    return m


def _moment_seq_renormalized(lam, k, n_max):
    """rho(lam) * M_n: the pole of Gamma(-2 i lam) in M_0 is cancelled exactly.

    rho(lam) M_0 = Gamma(1/2 - i lam)^2 / (Gamma(1/2-i lam-k) Gamma(1/2-i lam+k)),
    finite for all real lam including 0; the recurrence is unchanged.
    """
    lhalf = log_gamma(0.5 - 1j * lam)
    lm0 = 2.0 * lhalf - log_gamma(0.5 - 1j * lam - k) - log_gamma(0.5 - 1j * lam + k)
    m = np.zeros(n_max + 1, dtype=complex)
    m[0] = cmath.exp(lm0)
    if n_max >= 1:
        m[1] = -2j * k * m[0] / (1.0 + 2j * lam)
    for n in range(1, n_max):
        m[n + 1] = (-2j * k * m[n] - n * m[n - 1]) / (n + 1.0 + 2j * lam)
    return m


def rho(lam):
    """Threshold renormalizer Gamma(1/2 - i lam) / (sqrt(pi) Gamma(-i lam))."""
    lam = complex(lam)
    if lam == 0:
        return 0.0 + 0.0j
    return cmath.exp(log_gamma(0.5 - 1j * lam) - log_gamma(-1j * lam)) / _SQRT_PI


def i_nk_binomial(lam, k, n):
    """The moment integral by its binomial/beta closed form (reference route).

    I_{n,k} = pi 2^(n+1+2 i lam) (2i)^(-n) Gamma(-n - 2 i lam)
              * sum_j (-1)^(n-j) C(n,j) /
                (Gamma(1/2-i lam-k-j) Gamma(1/2-i lam+k-n+j)).
    Stable log-magnitude/phase accumulation; used as a cross-check of the
    recurrence route in the tests.
    """
    lam = complex(lam)
    if lam == 0:
        raise PoleError("i_nk_binomial: Gamma(-n - 2 i lam) pole at lam = 0")
    logs = np.empty(n + 1, dtype=complex)
    for j in range(n + 1):
        lb = math.lgamma(n + 1) - math.lgamma(j + 1) - math.lgamma(n - j + 1)
        logs[j] = (lb - log_gamma(0.5 - 1j * lam - k - j)
                   - log_gamma(0.5 - 1j * lam + k - n + j))
        if (n - j) % 2:
            logs[j] += 1j * math.pi
    mx = float(np.max(logs.real))
    total = complex(np.sum(np.exp(logs - mx)))
    pref = (math.log(math.pi) + (n + 1 + 2j * lam) * math.log(2.0)
            - n * cmath.log(2j) + log_gamma(-n - 2j * lam))
    return cmath.exp(pref + mx) * total


def _phase(k, sign):
    # exp(sign * i k pi / 2) exactly on the 4th roots of unity
    r = (sign * k) % 4
    return (1.0 + 0.0j, 1j, -1.0 + 0.0j, -1j)[r]


def coeffs_plus(p, N, K):
    """Plus-branch table s+[n,k] = t_n^+ sqrt(n!) phase_k [x^n] two-factor."""
    glog = gauge_log(p, BRANCH_PLUS, N)
    half_lf = 0.5 * np.array([math.lgamma(n + 1) for n in range(N + 1)])
    pre = np.exp(glog + half_lf)
    s = np.zeros((N + 1, 2 * K + 1), dtype=complex)
    b = p.b_plus
    for k in range(-K, K + 1):
        a = taylor_two_factor(b + k, b - k, N)
        s[:, k + K] = pre * a * (_phase(k, +1) / _SQRT_PI)
    return CoeffTable(BRANCH_PLUS, N, K, s, glog)


def coeffs_minus(p, N, K, renormalized=False):
    """Minus-branch table; renormalized applies the parity-rho rescaling.

    Raw mode has a Gamma pole at lam = 0; renormalized mode is finite there
    and coalesces entrywise with the plus branch.
    """
    lam = p.lam
    glog = gauge_log(p, BRANCH_MINUS, N)
    half_lf = 0.5 * np.array([math.lgamma(n + 1) for n in range(N + 1)])
    pre = np.exp(glog - half_lf)
    s = np.zeros((N + 1, 2 * K + 1), dtype=complex)
    if renormalized:
        parity = np.where(np.arange(N + 1) % 2 == 0, 1.0, -1.0)
        for k in range(-K, K + 1):
            m = _moment_seq_renormalized(lam, k, N)
            s[:, k + K] = parity * pre * m * (_phase(k, -1) / _SQRT_PI)
        return CoeffTable(BRANCH_MINUS_RENORMALIZED, N, K, s, glog)
    if lam == 0:
        raise PoleError("coeffs_minus: raw branch has a pole at lam = 0; "
                        "use renormalized=True")
    for k in range(-K, K + 1):
        m = _moment_seq(lam, k, N)
        s[:, k + K] = pre * m * (_phase(k, -1) / _SQRT_PI)
    return CoeffTable(BRANCH_MINUS, N, K, s, glog)


def dual_coeffs(p, N, K, branch):
    """Dual rows v[n,k] = <psi_k | T_branch^{-1} e_n> (inverse-gauge weighting).

    For real lam these are the conjugates of the weak dual coefficients
    u[n,k] = <e_n | (T^{-1})^dagger psi_k>; written analytically in lam they
    remain valid verbatim in the complementary regime.
    """
    lam = p.lam
    glog = gauge_log(p, branch, N)
    half_lf = 0.5 * np.array([math.lgamma(n + 1) for n in range(N + 1)])
    parity = np.where(np.arange(N + 1) % 2 == 0, 1.0, -1.0)
    v = np.zeros((N + 1, 2 * K + 1), dtype=complex)
    if branch == BRANCH_PLUS:
        pre = parity * np.exp(-glog - half_lf)
        for k in range(-K, K + 1):
            m = _moment_seq(-lam, k, N)
            v[:, k + K] = pre * m * (_phase(k, -1) / _SQRT_PI)
        return v
    if branch == BRANCH_MINUS:
        pre = parity * np.exp(half_lf - glog)
        bm = p.b_minus
        for k in range(-K, K + 1):
            a = taylor_two_factor(bm + k, bm - k, N)
            v[:, k + K] = pre * a * (_phase(k, +1) / _SQRT_PI)
        return v
    raise DomainError(f"dual_coeffs: unsupported branch {branch}")


def full_table(p, N, K, branch, renormalized=False):
    """Coefficient table with dual rows attached."""
    if branch == BRANCH_PLUS:
        tab = coeffs_plus(p, N, K)
        tab.dual = dual_coeffs(p, N, K, BRANCH_PLUS)
    else:
        tab = coeffs_minus(p, N, K, renormalized=renormalized)
        tab.dual = dual_coeffs(p, N, K, BRANCH_MINUS)
        if renormalized:
            # renormalization scales s by (-1)^n rho and v by its inverse;
            # at the threshold rho = 0 and the renormalized dual diverges
            r = rho(p.lam)
            if r == 0:
                tab.dual = None
            else:
                parity = np.where(np.arange(N + 1) % 2 == 0, 1.0, -1.0)
                tab.dual = (tab.dual.T * parity).T / r
    return tab


def intertwine_residual(p, table, ops):
    """Max relative residual of the X / U / S intertwining identities.

    The model actions are
        X:  (-n + b) s_{n,k}
        U:  usign * sqrt(n) (n-1-2b)^(1/2) s_{n-1,k}
        S:  ssign * (n-2b)^(1/2) sqrt(n+1) s_{n+1,k}
    against the column action of the tridiagonal matrices; asserted on
    interior indices only.  Square roots are per-factor principal, matching
    the gauge branch.
    """
    N, K = table.n_max, table.k_max
    if ops["X"].k_max != K:
        raise DomainError("intertwine_residual: table and operators disagree in K")
    plus = table.branch == BRANCH_PLUS
    b = p.b_plus if plus else p.b_minus
    usign = -1.0 if plus else 1.0
    ssign = 1.0 if plus else -1.0
    if table.branch == BRANCH_MINUS_RENORMALIZED:
        usign, ssign = -usign, -ssign
    s = table.s
    res = {"X": 0.0, "U": 0.0, "S": 0.0}

    def upd(name, lhs, rhs):
        lhs = lhs[1:-1]
        rhs = rhs[1:-1]
        scale = max(float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))), 1e-300)
        res[name] = max(res[name], float(np.max(np.abs(lhs - rhs))) / scale)

    for n in range(N + 1):
        upd("X", (-n + b) * s[n], ops["X"].transform_row(s[n]))
        if n >= 1:
            lhs = usign * math.sqrt(n) * cmath.sqrt(n - 1 - 2 * b) * s[n - 1]
            upd("U", lhs, ops["U"].transform_row(s[n]))
        if n <= N - 1:
            lhs = ssign * cmath.sqrt(n - 2 * b) * math.sqrt(n + 1) * s[n + 1]
            upd("S", lhs, ops["S"].transform_row(s[n]))
    return res


def _threshold_rationals(k, n_max):
    """Exact lam = 0 data: both branch recurrences in rational arithmetic.

    Plus branch (Taylor route): a_n = i^n r_n with
        r_{n+1} = (2 k r_n + n r_{n-1}) / (n+1),  r_0 = 1, r_1 = 2k.
    Renormalized minus branch (moment route): M_n = (-i)^n q_n with the same
    recurrence and q_0 = (-1)^k.  Coalescence is the exact identity
    q_n = (-1)^k r_n; we run both and insist on it.
    """
    r = [Fraction(1), Fraction(2 * k)]
    q0 = Fraction((-1) ** (k % 2))
    q = [q0, Fraction(2 * k) * q0]
    for n in range(1, n_max):
        r.append((2 * k * r[n] + n * r[n - 1]) / Fraction(n + 1))
        q.append((2 * k * q[n] + n * q[n - 1]) / Fraction(n + 1))
    return r[: n_max + 1], q[: n_max + 1]


def threshold_tables(N, K, h=1e-4):
    """Common threshold table S and divided-difference table D at mu = 1/4.

    S is the lam = 0 value computed independently from both branch closed
    forms in exact rational arithmetic (they must agree identically).
    D is the divided difference (s+(h) - s^-(h)) / (2 i h) with one
    Richardson step h -> h/2; the extrapolation error estimate is recorded.
    """
    if not 0.0 < h <= 1e-3:
        raise DomainError("threshold_tables: require 0 < h <= 1e-3")
    s_plus = np.zeros((N + 1, 2 * K + 1), dtype=complex)
    s_minus = np.zeros((N + 1, 2 * K + 1), dtype=complex)
    for k in range(-K, K + 1):
        r, q = _threshold_rationals(k, N)
        for n in range(N + 1):
            # plus route: e^{ik pi/2} [x^n] = i^k i^n r_n
            s_plus[n, k + K] = _phase(n + k, +1) * float(r[n]) / _SQRT_PI
            # minus route: (-1)^n e^{-ik pi/2} M_n, M_n = (-i)^n q_n
            ph = _phase(k, -1) * _phase(n, -1) * (1.0 if n % 2 == 0 else -1.0)
            s_minus[n, k + K] = ph * float(q[n]) / _SQRT_PI
    gap = float(np.max(np.abs(s_plus - s_minus)))
    scale = max(1.0, float(np.max(np.abs(s_plus))))
    if gap > 1e-9 * scale:
        raise ConsistencyError(
            f"threshold branches disagree at lam = 0: {gap:.3e} (scale {scale:.3e})")
    s_tab = s_plus
    # double-precision pipelines should tell the same story
    p0 = SpectralParam.threshold()
    sp = coeffs_plus(p0, N, K).s
    sm = coeffs_minus(p0, N, K, renormalized=True).s
    float_gap = float(np.max(np.abs(sp - sm)))
    if float_gap > 1e-9 * scale:
        raise ConsistencyError(
            f"threshold float pipelines disagree: {float_gap:.3e} (scale {scale:.3e})")

    def divided(hh):
        pp = SpectralParam.principal(hh)
        a = coeffs_plus(pp, N, K).s
        bren = coeffs_minus(pp, N, K, renormalized=True).s
        return (a - bren) / (2j * hh)

    d_coarse = divided(h)
    d_fine = divided(h / 2.0)
    d_extrap = 2.0 * d_fine - d_coarse
    err = np.abs(d_fine - d_coarse)
    return {
        "S": s_tab,
        "S_plus": s_plus,
        "S_minus": s_minus,
        "D": d_extrap,
        "D_coarse": d_coarse,
        "D_fine": d_fine,
        "richardson_error": err,
        "float_gap": float_gap,
    }


@dataclass
class JordanBlockModel:
    """Size-2 Jordan ladder at the threshold: eigenvalues z_n = -n - 1/2."""

    n_max: int

    @property
    def l_diag(self):
        return -(np.arange(self.n_max + 1) + 0.5)


def jordan_semigroup(model, tau):
    """Per-n blocks of exp(tau J): [[e, tau e], [0, e]], e = exp(tau z_n)."""
    if tau < 0:
        raise DomainError("jordan_semigroup: tau must be >= 0")
    e = np.exp(tau * model.l_diag)
    out = np.zeros((model.n_max + 1, 2, 2))
    out[:, 0, 0] = e
    out[:, 1, 1] = e
    out[:, 0, 1] = tau * e
    return out


@dataclass
class CorrelationResult:
    value: complex
    tail_bound: float
    n_max: int


def correlation(p, k_out, k_in, tau, N, tol=None):
    """Resonance expansion of <psi_kout | exp(tau X) psi_kin>.

    Sums exp(tau z_{n,branch}) v[n,k_out] s[n,k_in] over n <= N and both
    branches, and reports a tail bound of the form
    C exp(-tau (N+1)) <N>^(|k_in|+|k_out|-1) calibrated on the last terms.
    """
    if tau <= 0:
        raise DomainError("correlation: tau must be > 0")
    if p.regime == THRESHOLD:
        raise DomainError("correlation: defined for principal/complementary only")
    K = max(abs(k_out), abs(k_in))
    tp = full_table(p, N, K, BRANCH_PLUS)
    tm = full_table(p, N, K, BRANCH_MINUS)
    n = np.arange(N + 1)
    ep = np.exp(tau * (-n - 0.5 + 1j * p.lam))
    em = np.exp(tau * (-n - 0.5 - 1j * p.lam))
    prod_p = tp.dual[:, k_out + K] * tp.s[:, k_in + K]
    prod_m = tm.dual[:, k_out + K] * tm.s[:, k_in + K]
    value = complex(np.sum(ep * prod_p) + np.sum(em * prod_m))
    power = abs(k_in) + abs(k_out) - 1
    last = slice(max(0, N - 4), N + 1)
    weights = (1.0 + n[last] ** 2) ** (power / 2.0)
    c_est = float(np.max(
        (np.abs(prod_p[last]) + np.abs(prod_m[last])) / weights))
    tail = (2.0 * c_est * math.exp(-tau * (N + 1.5))
            * (1.0 + (N + 1.0) ** 2) ** (power / 2.0)
            / (1.0 - math.exp(-tau)))
    if tol is not None and tail > tol:
        raise AccuracyError(
            f"correlation: tail bound {tail:.3e} above requested {tol:.3e}",
            achieved=tail)
    return CorrelationResult(value, tail, N)


def trace_spherical(p, t, n_max=60):
    """Flat trace of exp(tX) on one spherical irreducible, plus partial sums.

    flat = 2 cos(t lam) e^{-t/2} / (1 - e^{-t}); in the complementary regime
    cos(t i nu) = cosh(t nu), at threshold lam = 0.  spectral_partial[N] is
    the resonance sum to order N; tail_exact[N] is the closed geometric tail
    so that flat = spectral_partial + tail_exact identically.
    """
    if t <= 0:
        raise DomainError("trace_spherical: t must be > 0")
    lam = p.lam
    flat = complex(2.0 * np.cos(t * lam)) * math.exp(-t / 2.0) / (1.0 - math.exp(-t))
    n = np.arange(n_max + 1)
    terms = np.exp(t * (-n - 0.5 + 1j * lam)) + np.exp(t * (-n - 0.5 - 1j * lam))
    partial = np.cumsum(terms)
    zp = np.exp(t * (-(n + 1) - 0.5 + 1j * lam))
    zm = np.exp(t * (-(n + 1) - 0.5 - 1j * lam))
    tail_exact = (zp + zm) / (1.0 - math.exp(-t))
    return {
        "flat": flat.real,
        "spectral_partial": partial.real,
        "tail_exact": tail_exact.real,
        "tail_bound": 2.0 * np.exp(-t * (n + 1.5)) / (1.0 - math.exp(-t)),
    }

"""Global resonance bookkeeping over an ingested Laplace spectrum.

Assembles the full resonance list (spherical branches per eigenvalue,
threshold Jordan pairs, discrete-series integers with Riemann-Roch
multiplicities, the trivial zero), the block semigroup of the propagator,
the elementary resolvent bound, and the global spectral trace in its
pre- and post-Riemann-Roch closed forms.
"""

import cmath
import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .discrete import rr_multiplicity
from .errors import ConsistencyError, DomainError

PRE_RR = "pre_rr"
POST_RR = "post_rr"

_THRESHOLD_TOL = 1e-12


@dataclass
class LaplaceSpectrum:
    """Positive Laplace eigenvalues (mu, multiplicity) on a genus-g surface."""

    entries: list
    genus: int

    def __post_init__(self):
        if self.genus < 2:
            raise DomainError("LaplaceSpectrum: genus must be >= 2")
        mus = [m for m, _ in self.entries]
        if any(m <= 0 for m in mus):
            raise DomainError("LaplaceSpectrum: eigenvalues must be > 0")
        if any(b <= a for a, b in zip(mus, mus[1:])):
            raise DomainError("LaplaceSpectrum: eigenvalues must be strictly increasing")
        if any(d < 1 for _, d in self.entries):
            raise DomainError("LaplaceSpectrum: multiplicities must be >= 1")

    def weyl_ratio(self):
        """count(mu <= R^2 + 1/4) / ((g-1) R^2) at the largest ingested scale."""
        if not self.entries:
            return None
        top = max(m for m, _ in self.entries)
        r2 = max(top - 0.25, 1e-12)
        count = sum(d for m, d in self.entries if m <= r2 + 0.25)
        return count / ((self.genus - 1) * r2)

    @classmethod
    def from_csv(cls, path, genus):
        entries = []
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or \
                    [f.strip() for f in reader.fieldnames] != ["mu", "multiplicity"]:
                raise DomainError(
                    f"laplace file {path}: header must be 'mu,multiplicity'")
            for row in reader:
                entries.append((float(row["mu"]), int(row["multiplicity"])))
        spec = cls(entries, genus)
        ratio = spec.weyl_ratio()
        if ratio is not None and not 0.2 <= ratio <= 5.0:
            raise ConsistencyError(
                f"laplace file {path}: Weyl sanity ratio {ratio:.3g} outside [0.2, 5]")
        return spec

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["mu", "multiplicity"])
            for mu, d in self.entries:
                writer.writerow([repr(float(mu)), d])


@dataclass
class ResonanceSpectrum:
    """Entries (value, multiplicity, jordan_size) sorted by decreasing Re."""

    entries: list = field(default_factory=list)

    def __post_init__(self):
        for z, mult, jsize in self.entries:
            if complex(z).real > 1e-12:
                raise DomainError("ResonanceSpectrum: resonances must have Re <= 0")
            if jsize not in (1, 2):
                raise DomainError("ResonanceSpectrum: jordan_size must be 1 or 2")
            if mult < 1:
                raise DomainError("ResonanceSpectrum: multiplicity must be >= 1")

    def values(self):
        return np.array([z for z, _, _ in self.entries])

    def jordan_values(self):
        return np.array([z for z, _, j in self.entries if j == 2])


def sqrt_shifted(mu):
    """sqrt(mu - 1/4) with the upper-branch convention i sqrt(1/4 - mu)."""
    if mu >= 0.25:
        return complex(math.sqrt(mu - 0.25))
    return 1j * math.sqrt(0.25 - mu)


def enumerate_resonances(spec, n_max, q_max):
    """Full resonance list from a Laplace spectrum plus Riemann-Roch data.

    Spherical: z = -n - 1/2 +- i sqrt(mu - 1/4) per eigenvalue (threshold
    eigenvalues emit one entry with jordan_size 2).  Discrete: z = -j with
    multiplicity sum of 2 m_{2q} over q <= min(j, q_max), n = j - q <= n_max.
    The trivial representation contributes {0}.  Coinciding values are
    merged with summed multiplicities.
    """
    if n_max < 1 or q_max < 1:
        raise DomainError("enumerate_resonances: n_max, q_max must be >= 1")
    acc = {}

    def add(z, mult, jsize):
        key = (round(z.real, 12), round(z.imag, 12), jsize)
        if key in acc:
            acc[key] = (acc[key][0], acc[key][1] + mult, jsize)
        else:
            acc[key] = (complex(key[0], key[1]), mult, jsize)

    add(0.0 + 0.0j, 1, 1)
    for mu, d in spec.entries:
        for n in range(n_max + 1):
            base = -n - 0.5
            if abs(mu - 0.25) <= _THRESHOLD_TOL:
                add(complex(base), d, 2)
            else:
                r = sqrt_shifted(mu)
                add(base + 1j * r, d, 1)
                add(base - 1j * r, d, 1)
    for j in range(1, n_max + q_max + 1):
        mult = 0
        for q in range(1, min(j, q_max) + 1):
            if j - q <= n_max:
                mult += 2 * rr_multiplicity(spec.genus, 2 * q)
        if mult:
            add(complex(-j), mult, 1)
    entries = sorted(acc.values(), key=lambda e: (-e[0].real, e[0].imag))
    return ResonanceSpectrum(entries)


def _discrete_series_sum(genus, t, q_max):
    # sum over q <= q_max of m_{2q} e^{-t q}
    x = math.exp(-t)
    total = 0.0
    for q in range(1, q_max + 1):
        total += rr_multiplicity(genus, 2 * q) * x ** q
    return total


def global_trace(spec, t, form=POST_RR, q_max=200):
    """Global spectral trace of the propagator at time t > 0.

    pre_rr sums the discrete multiplicities explicitly to q_max; post_rr
    uses the closed form with the |Euler characteristic| term.  The two
    agree up to the geometric q_max tail.
    """
    if t <= 0:
        raise DomainError("global_trace: t must be > 0")
    x = math.exp(-t)
    sph = 0.0
    for mu, d in spec.entries:
        r = sqrt_shifted(mu)
        sph += d * (cmath.cos(t * r)).real
    base = 1.0 + 2.0 * math.exp(-t / 2.0) / (1.0 - x) * sph
    if form == PRE_RR:
        return base + 2.0 / (1.0 - x) * _discrete_series_sum(spec.genus, t, q_max)
    if form == POST_RR:
        chi = abs(2 - 2 * spec.genus)
        return (base + 2.0 * x / (1.0 - x)
                + chi * x * (1.0 + x) / (1.0 - x) ** 3)
    raise DomainError(f"global_trace: unknown form {form!r}")


def block_semigroup(spec, t, n_max, q_list=(1, 2)):
    """Blockwise propagator: wave 2x2 blocks, threshold Jordan, discrete scalars.

    Returns a dict keyed by ('sph', mu) -> (n_max+1, 2, 2) complex blocks,
    ('thr',) -> the same shape when mu = 1/4 is present, and ('ds', q) ->
    (n_max+1,) scalars exp(-t(n + 1/2 + Lambda)) with Lambda = q - 1/2.
    Every block carries the oscillator factor exp(-t(n+1/2)).
    """
    if t < 0:
        raise DomainError("block_semigroup: t must be >= 0")
    n = np.arange(n_max + 1)
    osc = np.exp(-t * (n + 0.5))
    out = {}
    for mu, _ in spec.entries:
        if abs(mu - 0.25) <= _THRESHOLD_TOL:
            blk = np.zeros((n_max + 1, 2, 2), dtype=complex)
            blk[:, 0, 0] = osc
            blk[:, 1, 1] = osc
            blk[:, 0, 1] = t * osc
            out[("thr",)] = blk
        else:
            r = sqrt_shifted(mu)
            blk = np.zeros((n_max + 1, 2, 2), dtype=complex)
            blk[:, 0, 0] = osc * cmath.exp(1j * t * r)
            blk[:, 1, 1] = osc * cmath.exp(-1j * t * r)
            out[("sph", mu)] = blk
    for q in q_list:
        lam_ds = q - 0.5
        out[("ds", q)] = osc * math.exp(-t * lam_ds)
    return out


def resolvent_bound(z, rs):
    """Elementary resolvent bound 1/dist + (Jordan) 1/dist^2."""
    z = complex(z)
    vals = rs.values()
    if vals.size == 0:
        raise DomainError("resolvent_bound: empty spectrum")
    d = float(np.min(np.abs(vals - z)))
    if d == 0.0:
        raise DomainError(f"resolvent_bound: z = {z} lies in the spectrum")
    bound = 1.0 / d
    jvals = rs.jordan_values()
    if jvals.size:
        dj = float(np.min(np.abs(jvals - z)))
        if dj == 0.0:
            raise DomainError(f"resolvent_bound: z = {z} lies in the Jordan set")
        bound += 1.0 / dj ** 2
    return bound

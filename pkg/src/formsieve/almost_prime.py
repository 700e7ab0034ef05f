"""Factored form values, the almost-prime census, and the sieve constants.

The census walks the pairs (p, n) with p prime, p <= N, 0 < n < N, factors
|f(p, n)| completely, and tabulates Omega (prime factors with multiplicity);
a value with Omega <= r is a P_r.  The threshold r = floor(3k/4) + 1 is the
least integer exceeding 3k/4 + 0.144001, the loss constant of the weighted
sieve that the census is probing.

The singular product log z * prod_{p<z} (1 - nu(p)/p) should stabilize to a
positive constant for an admissible form; nu counts here come from the
Frobenius gcd degree, so grids up to z = 1e6 stay cheap.
"""

import math
from dataclasses import dataclass, field

from . import kernels
from .primes import is_prime, sieve_primes

DELTA_R = 0.144001  # weighted-sieve loss; r must exceed 3k/4 + this


class FactorBudgetExceeded(RuntimeError):
    """Factorization gave up within the configured rho budget."""


@dataclass(frozen=True)
class FactoredValue:
    """A nonzero integer with its complete factorization (of |value|)."""

    value: int
    factors: tuple  # ((prime, exponent), ...) ascending

    @property
    def omega(self):
        """Prime factors counted with multiplicity."""
        return sum(e for _p, e in self.factors)

    def min_prime(self):
        return self.factors[0][0] if self.factors else None

    def tier_count(self, beta_cut):
        """Two-tier factor count: primes below beta_cut once, the rest with
        multiplicity."""
        return sum(1 if p < beta_cut else e for p, e in self.factors)

    def multiply_back(self):
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out


def factor(value, trial_limit=10**6, rho_budget=64, rho_seed=0):
    """Complete factorization of a nonzero integer.

    Trial division to `trial_limit` then Brent rho with the deterministic
    increment schedule starting at 1 + rho_seed; every reported prime
    carries a Miller-Rabin certificate (deterministic below 3.3e24, error
    < 2**-80 beyond).  Raises FactorBudgetExceeded when the rho budget runs
    out.
    """
    v = int(value)
    if v == 0:
        raise ValueError("cannot factor 0")
    a = abs(v)
    if a == 1:
        return FactoredValue(v, ())
    try:
        if a < (1 << 63):
            fl = kernels.factor_u64(a, trial_limit, rho_budget, 1 + rho_seed)
        else:
            from . import _pykernels

            fl = _pykernels.factor_u64(a, trial_limit, rho_budget, 1 + rho_seed)
    except RuntimeError as exc:
        raise FactorBudgetExceeded(str(exc)) from None
    fv = FactoredValue(v, tuple((int(p), int(e)) for p, e in fl))
    if fv.multiply_back() != a:
        raise AssertionError(f"factorization of {v} fails to multiply back")
    for p, _e in fv.factors:
        if not is_prime(p):
            raise AssertionError(f"non-prime factor {p} reported for {v}")
    return fv


def r_threshold(k):
    """floor(3k/4) + 1, the almost-prime threshold at degree k >= 3.

    Coincides with the least integer r with r > 3k/4 + 0.15 (checked)."""
    k = int(k)
    if k < 3:
        raise ValueError("threshold defined for degree k >= 3")
    r = 3 * k // 4 + 1
    least = math.floor(0.75 * k + 0.15) + 1
    if r != least:
        raise AssertionError(f"threshold identity fails at k={k}")
    return r


@dataclass
class CensusReport:
    N: int
    r: int
    alpha_exp: float
    beta_exp: float
    counts_by_omega: dict = field(default_factory=dict)
    tier_count: int = 0
    factor_failures: int = 0
    skipped_zero: int = 0
    pairs: list = None  # optional (p, n, value, omega) rows

    def p_count(self, r=None):
        """Number of pairs whose value is a P_r (Omega <= r)."""
        r = self.r if r is None else r
        return sum(c for om, c in self.counts_by_omega.items() if om <= r)

    @property
    def p_r_count(self):
        return self.p_count()

    @property
    def total_pairs(self):
        return sum(self.counts_by_omega.values())

    @property
    def normalized_density(self):
        return self.p_r_count * math.log(self.N) ** 2 / self.N**2 if self.N > 1 else 0.0

    def summary(self):
        return {
            "N": self.N,
            "r": self.r,
            "counts_by_omega": {str(k): v for k, v in sorted(self.counts_by_omega.items())},
            "p_r_count": self.p_r_count,
            "normalized_density": self.normalized_density,
            "tier_rule_count": self.tier_count,
            "tier_alpha_exp": self.alpha_exp,
            "tier_beta_exp": self.beta_exp,
            "factor_failures": self.factor_failures,
            "skipped_zero_values": self.skipped_zero,
            "total_pairs": self.total_pairs,
        }


def _census_chunk(args):
    (coeffs, N, p_list, small_cut, beta_cut, r, trial_limit, rho_budget,
     rho_seed, collect) = args
    from .forms import BinaryForm

    form = BinaryForm(coeffs)
    counts = {}
    tier = 0
    failures = 0
    skipped = 0
    pairs = [] if collect else None
    for p in p_list:
        for n in range(1, N):
            v = form.evaluate(p, n)
            if v == 0:
                skipped += 1
                continue
            try:
                fv = factor(v, trial_limit, rho_budget, rho_seed)
            except FactorBudgetExceeded:
                failures += 1
                continue
            om = fv.omega
            counts[om] = counts.get(om, 0) + 1
            if fv.min_prime() > small_cut and fv.tier_count(beta_cut) <= r:
                tier += 1
            if collect:
                pairs.append((p, n, v, om))
    return counts, tier, failures, skipped, pairs


def census(form, N, r=None, alpha_exp=0.1, beta_exp=0.5, *, collect_pairs=False,
           jobs=1, trial_limit=10**6, rho_budget=64, rho_seed=0):
    """Almost-prime census of f(p, n) over primes p <= N and 0 < n < N.

    Tabulates the distribution of Omega, the P_r count (Omega <= r with
    r defaulting to the degree threshold), and a secondary sieve-style count
    where prime factors below N**beta_exp are counted once and values with a
    factor below N**alpha_exp are excluded.  Factorization timeouts are
    tallied, never silently dropped.
    """
    N = int(N)
    if r is None:
        r = r_threshold(form.degree)
    small_cut = float(N) ** alpha_exp
    beta_cut = float(N) ** beta_exp
    plist = [int(p) for p in sieve_primes(N)]
    chunks = _p_chunks(plist, jobs)
    args = [(form.coeffs, N, c, small_cut, beta_cut, r, trial_limit, rho_budget,
             rho_seed, collect_pairs) for c in chunks]
    if jobs <= 1:
        partials = [_census_chunk(a) for a in args]
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            partials = list(ex.map(_census_chunk, args))
    report = CensusReport(N=N, r=r, alpha_exp=alpha_exp, beta_exp=beta_exp,
                          pairs=[] if collect_pairs else None)
    for counts, tier, failures, skipped, pairs in partials:
        for om, c in counts.items():
            report.counts_by_omega[om] = report.counts_by_omega.get(om, 0) + c
        report.tier_count += tier
        report.factor_failures += failures
        report.skipped_zero += skipped
        if collect_pairs:
            report.pairs.extend(pairs)
    return report


def _p_chunks(plist, jobs):
    if not plist:
        return []
    if jobs <= 1:
        return [plist]
    n = max(1, jobs) * 4
    size = (len(plist) + n - 1) // n
    return [plist[i : i + size] for i in range(0, len(plist), size)]


def singular_series(form, z_grid):
    """log z * prod_{p < z} (1 - nu(p)/p) at each z of the ascending grid.

    Accumulated as compensated sums of log(1 - nu(p)/p); raises when some
    nu(p) = p (the product vanishes: the form has a fixed divisor).
    """
    zs = sorted(int(z) for z in z_grid)
    if not zs or zs[0] < 2:
        raise ValueError("grid values must be >= 2")
    g = form.dehomogenize()
    primes = [int(p) for p in sieve_primes(zs[-1] - 1)]
    counts = kernels.frobenius_counts(g, primes)
    terms = []
    out = []
    zi = 0
    for p, c in zip(primes + [None], counts + [None]):
        while zi < len(zs) and (p is None or p >= zs[zi]):
            z = zs[zi]
            out.append((z, math.log(z) * math.exp(math.fsum(terms))))
            zi += 1
        if p is None:
            break
        if c >= p:
            raise ValueError(f"nu({p}) = {p}: form has a fixed divisor at {p}")
        terms.append(math.log1p(-c / p))
    return out


@dataclass(frozen=True)
class SieveConstants:
    """Numeric sieve ingredients for a form of degree k."""

    degree: int
    r: int
    delta_r: float = DELTA_R
    cf_estimates: tuple = ()


def sieve_constants(form, z_grid=(10**3, 10**4, 10**5, 10**6)):
    return SieveConstants(
        degree=form.degree,
        r=r_threshold(form.degree),
        delta_r=DELTA_R,
        cf_estimates=tuple(singular_series(form, z_grid)),
    )

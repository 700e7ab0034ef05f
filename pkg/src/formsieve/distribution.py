"""Congruence sums A_d, expected main terms M_d, and the level-of-
distribution experiment over a dyadic range of moduli.

A_d(N, alpha) sums alpha_m W(n/N) over 0 < m <= N and n with d | f(m,n);
M_d(N, alpha) = N nu(d) What(0) / d * sum_{m<=N} alpha_m.  The experiment
measures E(D, N) = sum_{d ~ D} |A_d - M_d| (here and throughout, d ~ D
means D <= d < 2D) and reports it against the trivial scale sum |M_d|.

When gcd(m, d) = 1 the congruence d | f(m,n) is n = m*rho (mod d) over the
roots rho of the dehomogenized polynomial, which is how A_d is evaluated;
the gcd(m, d) > 1 leftover is tiny for prime-supported coefficients (a
prime m sharing a factor with d must divide d) and is handled by direct
divisibility testing.  For general coefficients the leftover falls back to
a compiled double loop over the non-coprime rows.
"""

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import congruence, kernels
from .forms import BinaryForm
from .lattice import classes_uprime, count_points_in_box
from .primes import sieve_primes
from .sieve_core import CoefficientSequence, WeightFunction, main_term, psi_direct

DEFAULT_WORK_LIMIT = 10**9
WORK_LIMIT_ENV = "FORMSIEVE_WORKLIMIT"


class WorkLimitExceeded(RuntimeError):
    """Estimated inner-operation count exceeds the configured budget."""

    def __init__(self, estimate, limit):
        super().__init__(
            f"estimated work {estimate:.3g} inner ops exceeds limit {limit:.3g}; "
            f"raise --work-limit (or {WORK_LIMIT_ENV}) to override"
        )
        self.estimate = estimate
        self.limit = limit


def work_limit_from_env(default=DEFAULT_WORK_LIMIT):
    raw = os.environ.get(WORK_LIMIT_ENV)
    return int(float(raw)) if raw else default


def _n_section_mod(coeffs, m, d, n_arr):
    """f(m, n) mod d for an int64 vector of n values (Horner, overflow-safe
    for d < 2**31)."""
    k = len(coeffs) - 1
    c = []
    mp = 1
    mm = m % d
    for i in range(k, -1, -1):
        c.append(coeffs[i] % d * mp % d)
        mp = mp * mm % d
    c.reverse()
    acc = np.zeros(len(n_arr), dtype=np.int64)
    nn = n_arr % d
    for ci in reversed(c):
        acc = (acc * nn + ci) % d
    return acc


def a_d(form, d, N, alpha, W, roots=None, wtable=None, factorization=None):
    """The congruence sum A_d(N, alpha), exactly.

    Coprime-m rows walk the progressions n = m*rho (mod d) with a per-residue
    weight-sum cache; non-coprime rows use the prime-divisor shortcut when
    alpha is prime-supported, else the compiled brute-force sweep.
    """
    N = int(N)
    d = int(d)
    if d < 1:
        raise ValueError("modulus must be >= 1")
    g = form.dehomogenize()
    if roots is None:
        roots = congruence.roots_mod(g, d, factorization=factorization)
    if wtable is None:
        wtable = W.table(N)
    total = 0.0 + 0.0j
    tcache = {}
    for m in alpha.nonzero_indices(N):
        m = int(m)
        if math.gcd(m, d) != 1:
            continue
        s = 0.0
        for rho in roots:
            r = (m * rho) % d
            ts = tcache.get(r)
            if ts is None:
                ts = 0.0
                for n in range(r if r > 0 else d, N, d):
                    ts += wtable[n]
                tcache[r] = ts
            s += ts
        if s:
            total += complex(alpha.values[m]) * s
    # gcd(m, d) > 1 leftover
    if d == 1:
        return total
    if alpha.prime_support:
        if factorization is None:
            factorization = kernels.factor_u64(d)
        n_arr = np.arange(1, N, dtype=np.int64)
        for p, _e in factorization:
            if p > N or alpha.values[p] == 0:
                continue
            vals = _n_section_mod(form.coeffs, p, d, n_arr)
            hits = np.nonzero(vals == 0)[0]
            if len(hits):
                total += complex(alpha.values[p]) * float(wtable[1:N][hits].sum())
    else:
        sums = kernels.ad_weight_sums(form.coeffs, d, N, wtable, noncoprime_only=True)
        total += complex(np.dot(alpha.values[: N + 1], sums))
    return total


def m_d(d, nu_d, N, alpha, W):
    """M_d(N, alpha) = N nu(d) What(0) / d * sum_{m <= N} alpha_m."""
    return N * nu_d * W.hat0() / d * alpha.sum_upto(N)


@dataclass
class DiscrepancyReport:
    """Per-modulus records and aggregates of one (N, D) experiment."""

    N: int
    D: int
    theta: float
    eta: float
    alpha_label: str
    records: list = field(default_factory=list)  # (d, nu, A complex, M complex, err)
    total_error: float = 0.0
    sum_abs_m: float = 0.0
    gcd_correction: float = None
    split: bool = False
    s1: float = 0.0
    s2: float = 0.0
    s3: float = 0.0
    n_small_classes: int = 0
    work_estimate: int = 0

    @property
    def normalized_error(self):
        if self.sum_abs_m == 0.0:
            return None
        return self.total_error / self.sum_abs_m

    @property
    def in_averaging_range(self):
        """theta <= 4/3: the regime where averaging over d is expected to
        beat the trivial scale; larger theta is allowed but flagged."""
        return self.theta <= 4.0 / 3.0

    def summary(self):
        return {
            "N": self.N,
            "D": self.D,
            "theta": self.theta,
            "alpha": self.alpha_label,
            "total_error": self.total_error,
            "sum_abs_M": self.sum_abs_m,
            "normalized_error": self.normalized_error,
            "gcd_correction": self.gcd_correction,
            "in_averaging_range": self.in_averaging_range,
            "split_eta": self.eta if self.split else None,
            "S1": self.s1 if self.split else None,
            "S2": self.s2 if self.split else None,
            "S3": self.s3 if self.split else None,
            "small_b11_classes": self.n_small_classes if self.split else None,
            "work_estimate": self.work_estimate,
        }


def _estimate_work(D, N, alpha, split):
    nnz = len(alpha.nonzero_indices(N))
    if alpha.prime_support:
        per_d = nnz * 3 + N
    else:
        per_d = N * N  # full noncoprime double loop per modulus
    if split:
        per_d += nnz * 3 + N
    return int(D * per_d)


def _lod_chunk(args):
    (coeffs, N, D, d_list, values, prime_support, label, quad_tol, hat0, split, eta) = args
    form = BinaryForm(coeffs)
    alpha = CoefficientSequence(values, label=label, prime_support=prime_support)
    W = WeightFunction(quad_tol=quad_tol)
    W._cache[0.0] = complex(hat0, 0.0)  # pin so workers share the parent's value
    wtable = W.table(N)
    cache = congruence.RootCache(form.dehomogenize(), 2 * D)
    thr = D ** (0.5 - eta)
    records = []
    s1 = s2_count = 0
    s3 = 0.0
    for d in d_list:
        fact = cache.factorization(d)
        roots = cache.roots(d)
        A = a_d(form, d, N, alpha, W, roots=roots, wtable=wtable, factorization=fact)
        M = m_d(d, roots.count, N, alpha, W)
        records.append((d, roots.count, A, M, abs(A - M)))
        if split and roots.count:
            for cl in classes_uprime(form, d, roots):
                if cl.basis.b11 <= thr:
                    s2_count += 1
                    s1 += count_points_in_box(cl.basis, N)[0]
                else:
                    psi = psi_direct(cl.basis, N, alpha, W)
                    s3 += abs(psi - main_term(d, N, alpha, W))
    return records, s1, s2_count, s3


def lod_experiment(form, N, theta, alpha, W, *, eta=0.05, split_b11=False,
                   work_limit=None, jobs=1, oracle_bound=0):
    """Run the discrepancy experiment over d ~ D with D = floor(N**theta).

    theta <= 4/3 is the regime where the averaged error is expected to be
    nontrivial; larger theta is allowed but flagged by the report as outside
    the averaging range.  With
    `split_b11`, per-class diagnostics S1/S2/S3 split the classes at
    B11 <= D**(1/2 - eta).  `oracle_bound` > 0 additionally recomputes A_d
    by the compiled double loop for every d <= oracle_bound and insists on
    agreement (slow; testing hook).
    """
    N = int(N)
    D = int(float(N) ** theta)
    if D < 1:
        raise ValueError("D = floor(N**theta) must be >= 1")
    if work_limit is None:
        work_limit = work_limit_from_env()
    estimate = _estimate_work(D, N, alpha, split_b11)
    if estimate > work_limit:
        raise WorkLimitExceeded(estimate, work_limit)
    hat0 = W.hat0()
    args = [
        (form.coeffs, N, D, chunk, alpha.values, alpha.prime_support, alpha.label,
         W.quad_tol, hat0, split_b11, eta)
        for chunk in _chunks_for(range(D, 2 * D), jobs)
    ]
    if jobs <= 1:
        partials = [_lod_chunk(a) for a in args]
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            partials = list(ex.map(_lod_chunk, args))
    report = DiscrepancyReport(N=N, D=D, theta=theta, eta=eta,
                               alpha_label=alpha.label, split=split_b11,
                               work_estimate=estimate)
    s2_count = 0
    for records, s1, s2c, s3 in partials:
        for rec in records:
            report.records.append(rec)
            report.total_error += rec[4]
            report.sum_abs_m += abs(rec[3])
        report.s1 += s1
        s2_count += s2c
        report.s3 += s3
    report.n_small_classes = s2_count
    report.s2 = (N * N / D) * s2_count
    if alpha.prime_support:
        report.gcd_correction = gcd_contribution(form, N, D, alpha, W)
    if oracle_bound:
        wtable = W.table(N)
        for d, _nu, A, _M, _err in report.records:
            if d > oracle_bound:
                continue
            sums = kernels.ad_weight_sums(form.coeffs, d, N, wtable)
            brute = complex(np.dot(alpha.values[: N + 1], sums))
            if abs(brute - A) > 1e-9 * max(1.0, abs(brute)):
                raise AssertionError(f"A_d oracle mismatch at d={d}: {A} vs {brute}")
    return report


def _chunks_for(rng, jobs):
    items = list(rng)
    if jobs <= 1:
        return [items] if items else []
    n = max(1, jobs) * 4
    size = (len(items) + n - 1) // n
    return [items[i : i + size] for i in range(0, len(items), size)] if items else []


def gcd_contribution(form, N, D, alpha, W, wtable=None):
    """sum_{d ~ D} sum over (m, n) with gcd(m, d) > 1, d | f(m,n) of
    |alpha_m| W(n/N); requires prime-supported alpha (then m | d).

    Iterates primes p <= N over their multiples in the dyadic range.
    """
    if not alpha.prime_support:
        raise ValueError("gcd_contribution requires prime-supported coefficients")
    N = int(N)
    D = int(D)
    if wtable is None:
        wtable = W.table(N)
    n_arr = np.arange(1, N, dtype=np.int64)
    w_arr = np.asarray(wtable[1:N], dtype=np.float64)
    total = 0.0
    for p in sieve_primes(min(N, 2 * D - 1)):
        p = int(p)
        am = abs(complex(alpha.values[p])) if p < len(alpha.values) else 0.0
        if am == 0.0:
            continue
        j0 = -(-D // p)
        for j in range(j0, -(-2 * D // p)):
            d = p * j
            if d >= 2 * D:
                break
            vals = _n_section_mod(form.coeffs, p, d, n_arr)
            hits = vals == 0
            if hits.any():
                total += am * float(w_arr[hits].sum())
    return total


def prime_square_sum(form, N, delta1, alpha, W):
    """sum of |A_{p^2}(N, alpha)| over primes N**delta1 <= p <= N**(2-delta1).

    Roots mod p^2 are lifted from the prime level; the window must keep p^2
    inside 64-bit range.
    """
    if delta1 <= 0:
        raise ValueError("delta1 must be positive")
    N = int(N)
    lo = float(N) ** delta1
    hi = float(N) ** (2.0 - delta1)
    if lo > hi:
        return 0.0
    if hi >= 2.0**31.5:
        raise ValueError("window exceeds the 64-bit p^2 bound")
    g = form.dehomogenize()
    wtable = W.table(N)
    total = 0.0
    for p in sieve_primes(int(hi)):
        p = int(p)
        if p < lo:
            continue
        roots = congruence.roots_mod_prime_power(g, p, 2)
        total += abs(a_d(form, p * p, N, alpha, W, roots=roots, wtable=wtable,
                         factorization=[(p, 2)]))
    return total

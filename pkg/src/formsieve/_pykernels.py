"""Pure-Python/numpy implementations of the hot kernels.

Same contracts as the compiled extension `_ckernels`; selected as a fallback
by :mod:`formsieve.kernels` when the extension is missing or when
FORMSIEVE_PURE is set.  Vectorized with numpy where the loop structure
permits; correctness over speed everywhere else.

Shared argument conventions:
  * polynomial coefficients are identity-indexed ints (c[i] multiplies t**i);
  * form coefficients are a_0..a_k with a_i multiplying x**(k-i) * y**i;
  * all moduli must stay below 2**31 so that int64 products cannot overflow.
"""

import math

import numpy as np

from . import polymod

BACKEND_NAME = "python"

MAX_MODULUS = 1 << 31


def _check_modulus(d):
    if not 1 <= d < MAX_MODULUS:
        raise ValueError(f"modulus {d} outside supported range [1, 2^31)")


def poly_roots_mod(coeffs, d):
    """Exhaustive roots of g(t) = 0 (mod d): sorted list of t in [0, d)."""
    _check_modulus(d)
    if d == 1:
        return [0]
    c = [int(x) % d for x in coeffs]
    t = np.arange(d, dtype=np.int64)
    acc = np.zeros(d, dtype=np.int64)
    for ci in reversed(c):
        acc = (acc * t + ci) % d
    return np.nonzero(acc == 0)[0].tolist()


def frobenius_counts(coeffs, primes):
    """Distinct-root counts of g mod p for each prime p (list of ints).

    The count is p itself when g vanishes identically mod p.
    """
    coeffs = [int(x) for x in coeffs]
    return [polymod.distinct_root_count(coeffs, int(p)) for p in primes]


def _n_poly_coeffs_mod(fcoeffs, m, d):
    """Coefficients of n -> f(m, n) reduced mod d; index i multiplies n**i."""
    k = len(fcoeffs) - 1
    out = [0] * (k + 1)
    mp = 1
    # a_i multiplies m**(k-i): walk i from k down so powers build up
    for i in range(k, -1, -1):
        out[i] = fcoeffs[i] % d * mp % d
        mp = mp * (m % d) % d
    return out


def solutions_mod(fcoeffs, d):
    """All (m, n) in [0,d)^2 with f(m,n) = 0 (mod d), as two int lists."""
    _check_modulus(d)
    fcoeffs = [int(x) for x in fcoeffs]
    n = np.arange(d, dtype=np.int64)
    ms, ns = [], []
    for m in range(d):
        c = _n_poly_coeffs_mod(fcoeffs, m, d)
        acc = np.zeros(d, dtype=np.int64)
        for ci in reversed(c):
            acc = (acc * n + ci) % d
        hits = np.nonzero(acc == 0)[0]
        ms.extend([m] * len(hits))
        ns.extend(hits.tolist())
    return ms, ns


def count_congruence_solutions(fcoeffs, d):
    """(total, primitive) counts of solutions of f(m,n) = 0 (mod d) in [0,d)^2.

    A solution is primitive when gcd(m, n, d) = 1.
    """
    _check_modulus(d)
    if d == 1:
        return 1, 1
    fcoeffs = [int(x) for x in fcoeffs]
    n = np.arange(d, dtype=np.int64)
    gn = np.gcd(n, d)
    total = 0
    primitive = 0
    for m in range(d):
        c = _n_poly_coeffs_mod(fcoeffs, m, d)
        acc = np.zeros(d, dtype=np.int64)
        for ci in reversed(c):
            acc = (acc * n + ci) % d
        mask = acc == 0
        cnt = int(np.count_nonzero(mask))
        total += cnt
        gm = math.gcd(m, d)
        if gm == 1:
            primitive += cnt
        elif cnt:
            primitive += int(np.count_nonzero(mask & (np.gcd(gn, gm) == 1)))
    return total, primitive


def ad_weight_sums(fcoeffs, d, N, w, noncoprime_only=False):
    """Per-m weight sums s[m] = sum of w[n] over 1 <= n < N with d | f(m,n).

    Returns a float64 array of length N + 1 (index 0 unused).  With
    `noncoprime_only`, rows with gcd(m, d) = 1 are left at zero.  This is the
    brute-force double loop used both as the congruence-sum oracle and as the
    general-coefficient gcd>1 branch.
    """
    _check_modulus(d)
    if d * max(N, 1) >= (1 << 62):
        raise ValueError("d*N too large for int64 Horner")
    fcoeffs = [int(x) for x in fcoeffs]
    w = np.asarray(w, dtype=np.float64)
    if len(w) < N:
        raise ValueError("weight table shorter than N")
    n = np.arange(1, N, dtype=np.int64) % d
    out = np.zeros(N + 1, dtype=np.float64)
    for m in range(1, N + 1):
        if noncoprime_only and math.gcd(m, d) == 1:
            continue
        c = _n_poly_coeffs_mod(fcoeffs, m, d)
        acc = np.zeros(len(n), dtype=np.int64)
        for ci in reversed(c):
            acc = (acc * n + ci) % d
        hits = np.nonzero(acc == 0)[0]
        if len(hits):
            # sequential accumulation in ascending n, matching the compiled twin
            s = 0.0
            for i in hits:
                s += w[i + 1]
            out[m] = s
    return out


# --- u64-ish factorization (works for arbitrary Python ints) ---------------


def is_prime_u64(v):
    from . import primes

    return primes.is_prime(v)


def _brent_rho(n, c):
    """One Brent-rho attempt with increment c; returns a nontrivial factor or 0."""
    if n % 2 == 0:
        return 2
    y, r, q = 2, 1, 1
    g, x, ys = 1, 0, 0
    m = 128
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        j = 0
        while j < r and g == 1:
            ys = y
            for _ in range(min(m, r - j)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            j += m
        r *= 2
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return 0 if g == n else g


_WHEEL_INC = (4, 2, 4, 2, 4, 6, 2, 6)


def factor_u64(v, trial_limit=1_000_000, rho_budget=64, c0=1):
    """Factor v >= 1 into sorted [(prime, exponent), ...].

    Trial division by a 2-3-5 wheel up to `trial_limit`, then Brent rho with
    the deterministic increment schedule c = c0, c0+1, ...  `rho_budget`
    caps the number of rho attempts per composite; exhausting it raises
    RuntimeError (callers convert to their own budget error).
    """
    v = int(v)
    if v < 1:
        raise ValueError("factor_u64 requires v >= 1")
    out = []
    for p in (2, 3, 5):
        if v % p == 0:
            e = 0
            while v % p == 0:
                v //= p
                e += 1
            out.append((p, e))
    p, i = 7, 0
    while p <= trial_limit and p * p <= v:
        if v % p == 0:
            e = 0
            while v % p == 0:
                v //= p
                e += 1
            out.append((p, e))
        p += _WHEEL_INC[i]
        i = (i + 1) % 8
    if v == 1:
        return sorted(out)
    if p * p > v or is_prime_u64(v):
        out.append((v, 1))
        return sorted(out)
    # composite remainder with no factor <= trial_limit: split with rho
    stack = [v]
    found = {}
    attempts = 0
    while stack:
        n = stack.pop()
        if is_prime_u64(n):
            found[n] = found.get(n, 0) + 1
            continue
        g = 0
        c = max(1, int(c0))
        while g == 0 or g == n:
            if attempts >= rho_budget:
                raise RuntimeError(f"rho budget exhausted factoring {n}")
            g = _brent_rho(n, c)
            c += 1
            attempts += 1
        stack.append(g)
        stack.append(n // g)
    out.extend(found.items())
    return sorted(out)

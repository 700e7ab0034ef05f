# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot inner loops.

Mirrors the API of `_pykernels` (see that module for the shared argument
conventions).  Everything here is exact integer arithmetic on 64-bit values;
moduli are capped at 2**31 so products never overflow, and the factorization
routines use 128-bit intermediates for the Miller-Rabin / Brent-rho steps.
"""

from libc.stdlib cimport free, malloc

ctypedef unsigned long long u64
ctypedef long long i64

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

BACKEND_NAME = "cython"

MAX_MODULUS = 1 << 31

cdef enum:
    MAXDEG = 32


cdef inline u64 gcd_u64(u64 a, u64 b) noexcept:
    cdef u64 t
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef inline u64 mulmod_u64(u64 a, u64 b, u64 m) noexcept:
    return <u64>((<u128>a * b) % m)


cdef inline u64 powmod_u64(u64 a, u64 e, u64 m) noexcept:
    cdef u64 r = 1 % m
    a %= m
    while e:
        if e & 1:
            r = mulmod_u64(r, a, m)
        a = mulmod_u64(a, a, m)
        e >>= 1
    return r


cdef int _load_coeffs(object coeffs, u64 d, u64* c) except -1:
    """Reduce identity-indexed coefficients mod d into c[0..deg]; returns deg."""
    cdef int k = len(coeffs) - 1
    cdef int i
    if k < 0 or k > MAXDEG:
        raise ValueError("polynomial degree outside [0, 32]")
    for i in range(k + 1):
        c[i] = <u64>(int(coeffs[i]) % <object>d)
    return k


def poly_roots_mod(coeffs, d):
    """Exhaustive roots of g(t) = 0 (mod d): sorted list of t in [0, d)."""
    cdef u64 dd
    if not 1 <= d < MAX_MODULUS:
        raise ValueError(f"modulus {d} outside supported range [1, 2^31)")
    dd = <u64>d
    if dd == 1:
        return [0]
    cdef u64 c[MAXDEG + 1]
    cdef int k = _load_coeffs(coeffs, dd, c)
    cdef list out = []
    cdef u64 t, acc
    cdef int i
    for t in range(dd):
        acc = 0
        for i in range(k, -1, -1):
            acc = (acc * t + c[i]) % dd
        if acc == 0:
            out.append(t)
    return out


# --- distinct-root counts via gcd(g, t**p - t) ------------------------------

cdef int _poly_rem_monic(u64* a, int da, u64* g, int dg, u64 p) noexcept:
    """a %= g in place (g monic of degree dg); returns new degree of a."""
    cdef int shift, i
    cdef u64 lead
    while da >= dg:
        lead = a[da]
        if lead:
            shift = da - dg
            for i in range(dg + 1):
                a[shift + i] = (a[shift + i] + p * p - mulmod_u64(lead, g[i], p)) % p
        da -= 1
    while da >= 0 and a[da] == 0:
        da -= 1
    return da


cdef int _poly_mulrem(u64* a, int da, u64* b, int db, u64* g, int dg,
                      u64 p, u64* out) noexcept:
    """out = a*b mod (g, p); returns degree of out.  Degrees < dg <= MAXDEG."""
    cdef u64 tmp[2 * MAXDEG + 1]
    cdef int i, j, dt
    if da < 0 or db < 0:
        return -1
    dt = da + db
    for i in range(dt + 1):
        tmp[i] = 0
    for i in range(da + 1):
        if a[i]:
            for j in range(db + 1):
                tmp[i + j] = (tmp[i + j] + mulmod_u64(a[i], b[j], p)) % p
    dt = _poly_rem_monic(tmp, dt, g, dg, p)
    for i in range(dt + 1):
        out[i] = tmp[i]
    return dt


cdef int _distinct_root_count(u64* craw, int k, u64 p) noexcept:
    """Number of distinct roots of the degree-<=k poly craw mod prime p.

    Returns p (as int via i64 path, caller handles) when poly is 0 mod p.
    Mirrors polymod.distinct_root_count.
    """
    cdef u64 a[MAXDEG + 1]
    cdef u64 g[MAXDEG + 1]
    cdef u64 xp[MAXDEG + 1]
    cdef u64 base[MAXDEG + 1]
    cdef u64 h[MAXDEG + 1]
    cdef u64 r[MAXDEG + 1]
    cdef int da = -1, i, dg, dxp, dbase, dh, dt
    cdef u64 inv, e
    for i in range(k + 1):
        a[i] = craw[i] % p
    for i in range(k, -1, -1):
        if a[i]:
            da = i
            break
    if da < 0:
        return -1  # identically zero: caller maps to p
    if da == 0:
        return 0
    if da == 1:
        return 1
    # monic g
    inv = powmod_u64(a[da], p - 2, p)
    dg = da
    for i in range(dg + 1):
        g[i] = mulmod_u64(a[i], inv, p)
    # xp = t**p mod g by square-and-multiply on base = t
    xp[0] = 1
    dxp = 0
    base[0] = 0
    base[1] = 1
    dbase = 1
    e = p
    while e:
        if e & 1:
            dxp = _poly_mulrem(xp, dxp, base, dbase, g, dg, p, xp)
        e >>= 1
        if e:
            dbase = _poly_mulrem(base, dbase, base, dbase, g, dg, p, base)
    # h = xp - t
    dh = dxp if dxp > 1 else 1
    for i in range(dh + 1):
        h[i] = xp[i] if i <= dxp else 0
    h[1] = (h[1] + p - 1) % p
    while dh >= 0 and h[dh] == 0:
        dh -= 1
    if dh < 0:
        return dg  # g | t**p - t: g splits with distinct roots
    # gcd(g, h), both nonzero; make divisor monic each round
    cdef u64 u[MAXDEG + 1]
    cdef u64 v[MAXDEG + 1]
    cdef int du = dg, dv = dh
    for i in range(dg + 1):
        u[i] = g[i]
    for i in range(dh + 1):
        v[i] = h[i]
    while dv >= 0:
        inv = powmod_u64(v[dv], p - 2, p)
        for i in range(dv + 1):
            v[i] = mulmod_u64(v[i], inv, p)
        du = _poly_rem_monic(u, du, v, dv, p)
        # swap u, v
        dt = du
        for i in range(max(du, dv) + 1):
            r[i] = u[i] if i <= du else 0
            u[i] = v[i] if i <= dv else 0
            v[i] = r[i]
        du = dv
        dv = dt
    return du


def frobenius_counts(coeffs, primes):
    """Distinct-root counts of g mod p for each prime p (list of ints)."""
    cdef u64 craw[MAXDEG + 1]
    cdef int k = len(coeffs) - 1
    cdef int i, cnt
    cdef u64 p
    if k < 0 or k > MAXDEG:
        raise ValueError("polynomial degree outside [0, 32]")
    big = [int(ai) for ai in coeffs]
    cdef list out = []
    for pp in primes:
        p = <u64>int(pp)
        if p >= MAX_MODULUS:
            raise ValueError("prime exceeds 2^31 kernel bound")
        for i in range(k + 1):
            craw[i] = <u64>(big[i] % <object>p)
        cnt = _distinct_root_count(craw, k, p)
        out.append(int(p) if cnt < 0 else cnt)
    return out


# --- exhaustive sweeps over (m, n) grids ------------------------------------

cdef int _m_section_coeffs(object big, int k, u64 m, u64 d, u64* c) noexcept:
    """c[i] = a_i * m**(k-i) mod d (coefficients of n -> f(m,n))."""
    cdef u64 mp = 1
    cdef u64 mm = m % d
    cdef int i
    for i in range(k, -1, -1):
        c[i] = mulmod_u64(<u64>big[i], mp, d)
        mp = mulmod_u64(mp, mm, d)
    return 0


def solutions_mod(fcoeffs, d):
    """All (m, n) in [0,d)^2 with f(m,n) = 0 (mod d), as two int lists."""
    cdef u64 dd
    if not 1 <= d < MAX_MODULUS:
        raise ValueError(f"modulus {d} outside supported range [1, 2^31)")
    dd = <u64>d
    cdef int k = len(fcoeffs) - 1
    if k < 0 or k > MAXDEG:
        raise ValueError("form degree outside [0, 32]")
    big = [int(ai) % d for ai in fcoeffs]
    cdef u64 c[MAXDEG + 1]
    cdef list ms = [], ns = []
    cdef u64 m, n, acc
    cdef int i
    for m in range(dd):
        _m_section_coeffs(big, k, m, dd, c)
        for n in range(dd):
            acc = 0
            for i in range(k, -1, -1):
                acc = (acc * n + c[i]) % dd
            if acc == 0:
                ms.append(m)
                ns.append(n)
    return ms, ns


def count_congruence_solutions(fcoeffs, d):
    """(total, primitive) solution counts of f(m,n) = 0 (mod d) in [0,d)^2."""
    cdef u64 dd
    if not 1 <= d < MAX_MODULUS:
        raise ValueError(f"modulus {d} outside supported range [1, 2^31)")
    if d == 1:
        return 1, 1
    dd = <u64>d
    cdef int k = len(fcoeffs) - 1
    if k < 0 or k > MAXDEG:
        raise ValueError("form degree outside [0, 32]")
    big = [int(ai) % d for ai in fcoeffs]
    cdef u64 c[MAXDEG + 1]
    cdef u64* gtab = <u64*>malloc(dd * sizeof(u64))
    if gtab == NULL:
        raise MemoryError()
    cdef u64 m, n, acc, gm
    cdef i64 total = 0, primitive = 0
    cdef int i
    try:
        for n in range(dd):
            gtab[n] = gcd_u64(n, dd)
        for m in range(dd):
            _m_section_coeffs(big, k, m, dd, c)
            gm = gtab[m]
            for n in range(dd):
                acc = 0
                for i in range(k, -1, -1):
                    acc = (acc * n + c[i]) % dd
                if acc == 0:
                    total += 1
                    if gm == 1 or gcd_u64(gm, gtab[n]) == 1:
                        primitive += 1
    finally:
        free(gtab)
    return int(total), int(primitive)


def ad_weight_sums(fcoeffs, d, N, double[::1] w, noncoprime_only=False):
    """Per-m weight sums s[m] = sum of w[n] over 1 <= n < N with d | f(m,n).

    Returns a list of length N + 1 (index 0 unused).  With `noncoprime_only`,
    rows with gcd(m, d) = 1 are skipped.
    """
    cdef u64 dd
    if not 1 <= d < MAX_MODULUS:
        raise ValueError(f"modulus {d} outside supported range [1, 2^31)")
    dd = <u64>d
    cdef i64 NN = N
    if w.shape[0] < NN:
        raise ValueError("weight table shorter than N")
    cdef int k = len(fcoeffs) - 1
    if k < 0 or k > MAXDEG:
        raise ValueError("form degree outside [0, 32]")
    big = [int(ai) % d for ai in fcoeffs]
    cdef bint skip_coprime = bool(noncoprime_only)
    cdef u64 c[MAXDEG + 1]
    cdef u64 m, acc, x
    cdef i64 n
    cdef int i
    cdef double s
    cdef list out = [0.0] * (NN + 1)
    for m in range(1, <u64>NN + 1):
        if skip_coprime and gcd_u64(m, dd) == 1:
            continue
        _m_section_coeffs(big, k, m, dd, c)
        s = 0.0
        for n in range(1, NN):
            x = (<u64>n) % dd
            acc = 0
            for i in range(k, -1, -1):
                acc = (acc * x + c[i]) % dd
            if acc == 0:
                s += w[n]
        if s != 0.0:
            out[m] = s
    return out


# --- u64 primality and factorization ----------------------------------------

cdef bint _mr_witness_u64(u64 a, u64 n, u64 dq, int s) noexcept:
    cdef u64 x = powmod_u64(a, dq, n)
    cdef int i
    if x == 1 or x == n - 1:
        return 0
    for i in range(s - 1):
        x = mulmod_u64(x, x, n)
        if x == n - 1:
            return 0
    return 1


cdef bint _is_prime_u64(u64 n) noexcept:
    cdef u64 small[13]
    cdef u64 dq
    cdef int s, i
    small[0] = 2; small[1] = 3; small[2] = 5; small[3] = 7; small[4] = 11
    small[5] = 13; small[6] = 17; small[7] = 19; small[8] = 23; small[9] = 29
    small[10] = 31; small[11] = 37; small[12] = 41
    if n < 2:
        return 0
    for i in range(13):
        if n % small[i] == 0:
            return n == small[i]
    dq = n - 1
    s = 0
    while dq % 2 == 0:
        dq >>= 1
        s += 1
    for i in range(12):  # witnesses 2..37 are enough for all u64
        if _mr_witness_u64(small[i], n, dq, s):
            return 0
    return 1


def is_prime_u64(v):
    """Deterministic Miller-Rabin for 0 <= v < 2**63."""
    vv = int(v)
    if not 0 <= vv < (1 << 63):
        raise ValueError("value outside u64 kernel range")
    cdef u64 n = <u64>vv
    return bool(_is_prime_u64(n))


cdef u64 _brent_rho_u64(u64 n, u64 c) noexcept:
    """Brent rho with increment c; returns a nontrivial factor or 0."""
    cdef u64 y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0, d
    cdef u64 i, j, lim
    if n % 2 == 0:
        return 2
    while g == 1:
        x = y
        for i in range(r):
            y = (mulmod_u64(y, y, n) + c) % n
        j = 0
        while j < r and g == 1:
            ys = y
            lim = 128 if r - j > 128 else r - j
            for i in range(lim):
                y = (mulmod_u64(y, y, n) + c) % n
                d = x - y if x > y else y - x
                q = mulmod_u64(q, d, n)
            g = gcd_u64(q, n)
            j += 128
        r *= 2
    if g == n:
        g = 1
        while g == 1:
            ys = (mulmod_u64(ys, ys, n) + c) % n
            d = x - ys if x > ys else ys - x
            g = gcd_u64(d, n)
    return 0 if g == n else g


_WHEEL_INC = (4, 2, 4, 2, 4, 6, 2, 6)


def factor_u64(v, trial_limit=1_000_000, rho_budget=64, c0=1):
    """Factor 1 <= v < 2**63 into sorted [(prime, exponent), ...].

    Trial division by a 2-3-5 wheel up to `trial_limit`, then Brent rho with
    the deterministic increment schedule c = c0, c0+1, ...  Exhausting
    `rho_budget` attempts raises RuntimeError.
    """
    vv = int(v)
    if vv < 1:
        raise ValueError("factor_u64 requires v >= 1")
    if vv >= (1 << 63):
        raise ValueError("value outside u64 kernel range")
    cdef u64 n = <u64>vv
    cdef u64 tl = <u64>int(trial_limit)
    cdef dict found = {}
    cdef u64 p
    cdef int e, i
    for p in (2, 3, 5):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
    p = 7
    i = 0
    cdef tuple inc = _WHEEL_INC
    while p <= tl and p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
        p += <u64>inc[i]
        i = (i + 1) % 8
    if n == 1:
        return sorted(found.items())
    if p * p > n or _is_prime_u64(n):
        found[n] = found.get(n, 0) + 1
        return sorted(found.items())
    cdef list stack = [n]
    cdef int attempts = 0
    cdef u64 cstart = <u64>max(1, int(c0))
    cdef u64 g, c, top
    while stack:
        top = <u64>stack.pop()
        if _is_prime_u64(top):
            found[top] = found.get(top, 0) + 1
            continue
        g = 0
        c = cstart
        while g == 0 or g == top:
            if attempts >= <int>rho_budget:
                raise RuntimeError(f"rho budget exhausted factoring {top}")
            g = _brent_rho_u64(top, c)
            c += 1
            attempts += 1
        stack.append(g)
        stack.append(top // g)
    return sorted(found.items())

"""Dense univariate polynomial arithmetic over Z/pZ, p prime.

Coefficient lists are identity-indexed (a[i] multiplies t**i) and kept
trimmed.  Degrees here are tiny (the degree of a binary form), so all
algorithms are schoolbook; the point is exactness, not speed.  The compiled
kernel reimplements the distinct-root count; this module is the reference
used by the pure backend and by the irreducibility certificate.
"""


def trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def reduce_mod(coeffs, p):
    """Coefficients reduced into [0, p), trimmed."""
    return trim([c % p for c in coeffs])


def poly_mul_mod(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return trim(out)


def poly_rem(a, g, p):
    """Remainder of a modulo monic g over Z/pZ."""
    a = a[:]
    dg = len(g) - 1
    while len(a) - 1 >= dg and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - dg
            for i in range(dg + 1):
                a[shift + i] = (a[shift + i] - lead * g[i]) % p
        a.pop()
    return trim(a)


def monic(a, p):
    if not a:
        return []
    inv = pow(a[-1], p - 2, p)
    return [(c * inv) % p for c in a]


def poly_gcd(a, b, p):
    """Monic gcd over Z/pZ (Euclid, divisor made monic each round)."""
    a, b = trim(a[:]), trim(b[:])
    while b:
        bm = monic(b, p)
        r = poly_rem(a, bm, p)
        a, b = bm, r
    return monic(a, p)


def pow_x_mod(e, g, p):
    """t**e modulo (g, p) by binary exponentiation; g monic of degree >= 1."""
    result = [1]
    base = poly_rem([0, 1], g, p)
    while e:
        if e & 1:
            result = poly_rem(poly_mul_mod(result, base, p), g, p)
        base = poly_rem(poly_mul_mod(base, base, p), g, p)
        e >>= 1
    return result


def distinct_root_count(coeffs, p):
    """Number of t in [0, p) with g(t) = 0 (mod p), via deg gcd(g, t**p - t).

    Returns p when g vanishes identically mod p.  Exact and deterministic;
    cost O(log p) small-degree multiplications, so usable far beyond any
    exhaustive-enumeration bound.
    """
    a = reduce_mod(coeffs, p)
    if not a:
        return p
    if len(a) == 1:
        return 0
    if len(a) == 2:
        return 1  # linear: single root
    g = monic(a, p)
    xp = pow_x_mod(p, g, p)
    # t**p - t mod g
    h = xp[:]
    while len(h) < 2:
        h.append(0)
    h[1] = (h[1] - 1) % p
    h = trim(h)
    if not h:
        return len(g) - 1  # g divides t**p - t: splits into distinct roots
    return len(poly_gcd(g, h, p)) - 1


def is_irreducible_mod_p(coeffs, p):
    """Rabin test: is g irreducible of degree deg(g) over Z/pZ?

    Requires the leading coefficient to be a unit mod p (degree preserved).
    """
    a = reduce_mod(coeffs, p)
    if len(a) != len(coeffs):
        raise ValueError("degree drops mod p; pick p not dividing the leading coefficient")
    k = len(a) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    g = monic(a, p)
    # x**(p**k) == x mod g, and gcd(x**(p**(k/q)) - x, g) = 1 for prime q | k
    def frob_minus_x(e):
        h = pow_x_mod(e, g, p)
        while len(h) < 2:
            h.append(0)
        h[1] = (h[1] - 1) % p
        return trim(h)

    if frob_minus_x(p**k):
        return False
    kk = k
    prime_divs = []
    q = 2
    while q * q <= kk:
        if kk % q == 0:
            prime_divs.append(q)
            while kk % q == 0:
                kk //= q
        q += 1
    if kk > 1:
        prime_divs.append(kk)
    for q in prime_divs:
        h = frob_minus_x(p ** (k // q))
        if not h:
            return False
        if len(poly_gcd(g, h, p)) - 1 > 0:
            return False
    return True

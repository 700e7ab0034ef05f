import math
import random

import pytest

from formsieve import congruence as cg
from formsieve import kernels


def brute_roots(g, d):
    return [t for t in range(d) if sum(c * t**i for i, c in enumerate(g)) % d == 0]


def test_roots_mod_prime_examples(cubic, square):
    g = cubic.dehomogenize()
    assert cg.roots_mod_prime(g, 3).roots == (1,)
    assert cg.roots_mod_prime(g, 2).roots == ()
    assert cg.roots_mod_prime(square.dehomogenize(), 2).roots == (1,)


def test_roots_mod_prime_power_examples(cubic, square):
    g = cubic.dehomogenize()
    # 2t^3+1 has the singular root 1 mod 3 (g' = 6t^2 = 0 mod 3); no lift mod 9
    assert cg.roots_mod_prime_power(g, 3, 2).roots == tuple(brute_roots(g, 9)) == ()
    gs = square.dehomogenize()
    assert cg.roots_mod_prime_power(gs, 2, 2).roots == tuple(brute_roots(gs, 4)) == ()
    for p in (2, 3, 5, 7):
        assert cg.roots_mod_prime_power(g, p, 1).roots == cg.roots_mod_prime(g, p).roots


def test_roots_mod_prime_power_random():
    rng = random.Random(23)
    for _ in range(150):
        k = rng.randint(1, 4)
        g = tuple(rng.randint(-8, 8) for _ in range(k + 1))
        p = rng.choice([2, 3, 5, 7])
        e = rng.randint(1, 4)
        got = cg.roots_mod_prime_power(g, p, e).roots
        assert list(got) == brute_roots(g, p**e), (g, p, e)


def test_nu_examples(cubic, square):
    g = cubic.dehomogenize()
    assert cg.nu(g, 1) == 1
    assert cg.nu(g, 15) == cg.nu(g, 3) * cg.nu(g, 5)
    assert cg.nu(g, 15) == len(brute_roots(g, 15))
    assert cg.nu(square.dehomogenize(), 65) == 4
    assert cg.roots_mod(square.dehomogenize(), 65).roots == tuple(
        brute_roots(square.dehomogenize(), 65)
    )


def test_nu_multiplicative_vs_exhaustive(cubic):
    g = cubic.dehomogenize()
    rng = random.Random(99)
    pairs = []
    while len(pairs) < 8:
        d1 = rng.randint(2, 1000)
        d2 = rng.randint(2, 1000)
        if math.gcd(d1, d2) == 1:
            pairs.append((d1, d2))
    pairs += [(9973, 8192), (10000, 9999)]  # near the stated 1e4 scale
    for d1, d2 in pairs:
        assert math.gcd(d1, d2) == 1
        prod = d1 * d2
        nu_prod = cg.nu(g, prod)
        assert nu_prod == cg.nu(g, d1) * cg.nu(g, d2)
        assert nu_prod == len(kernels.poly_roots_mod(g, prod))


def test_crt_glued_roots_exact(cubic):
    g = cubic.dehomogenize()
    for d in (15, 30, 35, 77, 105, 1001):
        rs = cg.roots_mod(g, d)
        for t in rs:
            assert sum(c * t**i for i, c in enumerate(g)) % d == 0
        assert list(rs.roots) == brute_roots(g, d)


def test_nu_bounded_by_degree(cubic):
    g = cubic.dehomogenize()
    for p in (2, 3, 5, 7, 11, 13, 101, 997):
        assert cg.nu(g, p) <= len(g) - 1


def test_policy_errors(cubic):
    g = cubic.dehomogenize()
    with pytest.raises(ValueError):
        cg.roots_mod_prime(g, 10**6 + 3)
    with pytest.raises(ValueError):
        cg.roots_mod_prime_power(g, 2, 64)  # 2^64 overflows
    with pytest.raises(ValueError):
        cg.nu(g, 12, factorization=[(2, 1), (3, 1)])  # product != 12
    with pytest.raises(ValueError):
        cg.nu(g, 12, factorization=[(4, 1), (3, 1)])  # 4 not prime
    assert cg.nu(g, 12, factorization=[(2, 2), (3, 1)]) == cg.nu(g, 12)


def test_root_cache_matches_direct(cubic):
    g = cubic.dehomogenize()
    cache = cg.RootCache(g, 600)
    for d in range(1, 600):
        assert cache.nu(d) == len(kernels.poly_roots_mod(g, d))
        assert list(cache.roots(d).roots) == kernels.poly_roots_mod(g, d)


def test_frobenius_count_matches_exhaustive(cubic, square):
    for form in (cubic, square):
        g = form.dehomogenize()
        for p in (2, 3, 5, 7, 11, 101, 997, 4999, 99991):
            assert cg.nu_count_prime(g, p) == len(kernels.poly_roots_mod(g, p))

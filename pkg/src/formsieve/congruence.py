"""Roots of the dehomogenized congruence g(t) = 0 (mod d) and the counting
function nu(d) = #roots, multiplicative over coprime moduli.

Policy: roots modulo a prime are found by exhaustive evaluation (compiled
kernel) up to a configurable bound; prime powers are lifted from the prime
level, Hensel-style, with singular roots branched exhaustively one level at
a time; composite moduli are glued by CRT.  nu at a single prime can also be
obtained without listing roots, via the Frobenius gcd degree, which is what
the singular-series accumulation uses for primes up to 1e6.
"""

from dataclasses import dataclass

from . import kernels
from .primes import factor_with_spf, is_prime, spf_table

DEFAULT_EXHAUSTIVE_BOUND = 10**6
_U63 = 1 << 63


@dataclass(frozen=True)
class RootSet:
    """Sorted residues t in [0, d) with g(t) = 0 (mod d)."""

    modulus: int
    roots: tuple

    @property
    def count(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)


def _eval_mod(g, t, d):
    acc = 0
    for c in reversed(g):
        acc = (acc * t + c) % d
    return acc


def _deriv(g):
    return tuple(i * c for i, c in enumerate(g) if i >= 1)


def roots_mod_prime(g, p, bound=DEFAULT_EXHAUSTIVE_BOUND):
    """Exact root set of g mod a prime p, by exhaustive evaluation.

    Refuses p beyond `bound` (desk-scale policy; root *counts* beyond the
    bound are available through nu_count_prime).
    """
    if p > bound:
        raise ValueError(f"prime {p} beyond the exhaustive root-finding bound {bound}")
    return RootSet(p, tuple(kernels.poly_roots_mod(g, p)))


def roots_mod_prime_power(g, p, e, bound=DEFAULT_EXHAUSTIVE_BOUND):
    """Exact root set of g mod p**e.

    Nonsingular roots (g'(t) != 0 mod p) lift uniquely by Hensel's lemma;
    singular roots are branched over all p lifts per level, which is always
    correct and cheap at desk scale.
    """
    if e < 1:
        raise ValueError("exponent must be >= 1")
    if p**e >= _U63:
        raise ValueError(f"{p}^{e} overflows the 64-bit modulus range")
    base = roots_mod_prime(g, p, bound)
    if e == 1:
        return base
    dg = _deriv(g)
    roots = list(base.roots)
    mod = p
    for _ in range(e - 1):
        new_mod = mod * p
        lifted = []
        for r in roots:
            if _eval_mod(dg, r, p) != 0:
                # unique lift: r - g(r)/g'(r), solved at the next level
                s = (-(_eval_mod(g, r, new_mod) // mod) * pow(_eval_mod(dg, r, p), -1, p)) % p
                lifted.append(r + mod * s)
            else:
                for i in range(p):
                    cand = r + mod * i
                    if _eval_mod(g, cand, new_mod) == 0:
                        lifted.append(cand)
        roots = sorted(lifted)
        mod = new_mod
    return RootSet(mod, tuple(roots))


def _validate_factorization(d, factorization):
    prod = 1
    seen = set()
    for p, e in factorization:
        if e < 1 or p < 2 or p in seen or not is_prime(p):
            raise ValueError(f"inconsistent factorization of {d}: bad entry ({p}, {e})")
        seen.add(p)
        prod *= p**e
    if prod != d:
        raise ValueError(f"inconsistent factorization of {d}: product is {prod}")


def _crt_glue(rootsets, d):
    """Glue per-prime-power root sets into roots mod d (sorted)."""
    glued = [0]
    mod = 1
    for rs in rootsets:
        q = rs.modulus
        inv = pow(mod, -1, q)  # mod, q coprime
        nxt = []
        for x in glued:
            for r in rs.roots:
                # x (mod `mod`), r (mod q) -> unique residue mod mod*q
                t = (r - x) * inv % q
                nxt.append(x + mod * t)
        glued = nxt
        mod *= q
    assert mod == d
    return sorted(glued)


def nu(g, d, factorization=None, bound=DEFAULT_EXHAUSTIVE_BOUND):
    """nu(d): number of roots of g mod d; nu(1) = 1 by convention.

    Computed as the product of the prime-power counts (no CRT list needed).
    """
    if d < 1:
        raise ValueError("modulus must be >= 1")
    if d == 1:
        return 1
    if factorization is None:
        if d >= _U63:
            raise ValueError("modulus too large; supply a factorization")
        factorization = kernels.factor_u64(d)
    else:
        _validate_factorization(d, factorization)
    out = 1
    for p, e in factorization:
        out *= roots_mod_prime_power(g, p, e, bound).count
        if out == 0:
            return 0
    return out


def roots_mod(g, d, factorization=None, bound=DEFAULT_EXHAUSTIVE_BOUND):
    """Exact root set of g modulo an arbitrary d >= 1 (CRT over prime powers)."""
    if d < 1:
        raise ValueError("modulus must be >= 1")
    if d == 1:
        return RootSet(1, (0,))
    if factorization is None:
        factorization = kernels.factor_u64(d) if d < _U63 else None
        if factorization is None:
            raise ValueError("modulus too large; supply a factorization")
    else:
        _validate_factorization(d, factorization)
    rootsets = [roots_mod_prime_power(g, p, e, bound) for p, e in factorization]
    if any(rs.count == 0 for rs in rootsets):
        return RootSet(d, ())
    return RootSet(d, tuple(_crt_glue(rootsets, d)))


def nu_count_prime(g, p):
    """nu(p) at a prime without listing roots (Frobenius gcd degree)."""
    return kernels.frobenius_counts(g, [p])[0]


class RootCache:
    """Amortized roots/nu for every modulus up to a limit.

    Backed by a smallest-prime-factor table so the per-d factorizations in a
    dyadic sweep cost O(log d), with per-prime-power root sets memoized.
    """

    def __init__(self, g, limit, bound=DEFAULT_EXHAUSTIVE_BOUND):
        self.g = tuple(int(c) for c in g)
        self.limit = limit
        self.bound = bound
        self._spf = spf_table(limit)
        self._pp_roots = {}

    def factorization(self, d):
        return factor_with_spf(d, self._spf)

    def _prime_power_roots(self, p, e):
        key = (p, e)
        rs = self._pp_roots.get(key)
        if rs is None:
            rs = roots_mod_prime_power(self.g, p, e, self.bound)
            self._pp_roots[key] = rs
        return rs

    def roots(self, d):
        if d == 1:
            return RootSet(1, (0,))
        fact = self.factorization(d)
        rootsets = [self._prime_power_roots(p, e) for p, e in fact]
        if any(rs.count == 0 for rs in rootsets):
            return RootSet(d, ())
        return RootSet(d, tuple(_crt_glue(rootsets, d)))

    def nu(self, d):
        if d == 1:
            return 1
        out = 1
        for p, e in self.factorization(d):
            out *= self._prime_power_roots(p, e).count
            if out == 0:
                return 0
        return out

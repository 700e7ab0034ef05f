"""Solution-class lattices of f(m,n) = 0 (mod d) and their reduced bases.

A class is a scalar-equivalence orbit of primitive solutions mod d; its
lattice consists of every point congruent mod d to a multiple of a class
representative, and always has determinant d.  Classes whose representative
has m invertible mod d (one per root of the dehomogenized congruence) carry
the canonical generators {(1, rho), (0, d)}.

Reduction is Lagrange-Gauss in exact integer arithmetic; the shortest
vector of a lattice need not be unique, so the basis is canonicalized by an
explicit tie-break (see `gauss_reduce`) to keep CSV output reproducible.
"""

import math
from dataclasses import dataclass

from . import congruence, kernels

EXHAUSTIVE_CLASS_BOUND = 2000


class DegenerateLatticeError(ValueError):
    """Generators were linearly dependent."""


@dataclass(frozen=True)
class ReducedBasis:
    """2x2 integer basis matrix with rows B1 = (b11, b12), B2 = (b21, b22)."""

    b11: int
    b12: int
    b21: int
    b22: int

    @property
    def det(self):
        return self.b11 * self.b22 - self.b12 * self.b21

    @property
    def rows(self):
        return (self.b11, self.b12), (self.b21, self.b22)

    @property
    def normsq1(self):
        return self.b11 * self.b11 + self.b12 * self.b12

    @property
    def normsq2(self):
        return self.b21 * self.b21 + self.b22 * self.b22

    def contains(self, x, y):
        """Exact membership of (x, y) in the generated lattice."""
        d = self.det
        a = x * self.b22 - y * self.b21
        b = -x * self.b12 + y * self.b11
        return a % d == 0 and b % d == 0


def _normsq(w):
    return w[0] * w[0] + w[1] * w[1]


def _lagrange(u, v):
    """Classic Lagrange reduction; returns (u, v) with |u| <= |v| <= |v +- u|."""
    if _normsq(u) > _normsq(v):
        u, v = v, u
    while True:
        nu_ = _normsq(u)
        dot = u[0] * v[0] + u[1] * v[1]
        q = (2 * dot + nu_) // (2 * nu_)  # round-half-up of dot/nu_
        if q:
            v = (v[0] - q * u[0], v[1] - q * u[1])
        if _normsq(v) < nu_:
            u, v = v, u
        elif not q:
            return u, v


def _lex_positive(w):
    """The representative of {w, -w} with first coordinate >= 0 (and second
    > 0 when the first vanishes)."""
    if w[0] > 0 or (w[0] == 0 and w[1] > 0):
        return w
    return (-w[0], -w[1])


def gauss_reduce(gen1, gen2):
    """Reduced basis of the lattice spanned by two independent vectors.

    B1 is a shortest nonzero vector, B2 a shortest vector independent of it;
    then det B = +det(lattice) and B11 >= 0.  Ties among equally short
    candidates are broken deterministically: sign-normalize each +-pair to a
    nonnegative first coordinate, prefer a strictly positive first
    coordinate, then take the lexicographically smallest (B11, B12).
    (A plain lexicographic minimum would turn the already-reduced identity
    basis into (0, 1)-first; preferring B11 > 0 keeps it fixed.)
    """
    u = (int(gen1[0]), int(gen1[1]))
    v = (int(gen2[0]), int(gen2[1]))
    if u[0] * v[1] - u[1] * v[0] == 0:
        raise DegenerateLatticeError(f"parallel generators {u}, {v}")
    u, v = _lagrange(u, v)

    cands = []
    for a, b in ((1, 0), (0, 1), (1, 1), (1, -1)):
        w = (a * u[0] + b * v[0], a * u[1] + b * v[1])
        cands.append(w)
        cands.append((-w[0], -w[1]))
    lam1 = min(_normsq(w) for w in cands)
    b1_pool = {_lex_positive(w) for w in cands if _normsq(w) == lam1}
    positive = [w for w in b1_pool if w[0] > 0]
    b1 = min(positive) if positive else min(b1_pool)

    indep = [w for w in cands if b1[0] * w[1] - b1[1] * w[0] != 0]
    lam2 = min(_normsq(w) for w in indep)
    b2_pool = [w for w in indep if _normsq(w) == lam2 and b1[0] * w[1] - b1[1] * w[0] > 0]
    b2 = min(b2_pool)
    return ReducedBasis(b1[0], b1[1], b2[0], b2[1])


def basis_from_generators(gens):
    """Two-vector basis of the lattice spanned by any number of generators.

    Integer row reduction on the first coordinate (extended gcd), then gcd of
    the residual second coordinates.  Raises for rank < 2.
    """
    h, hy = 0, 0
    for a, b in gens:
        if a == 0:
            continue
        g, s, t = _extgcd(h, a)
        hy = s * hy + t * b
        h = g
    z = 0
    for a, b in gens:
        if h:
            rem = b - (a // h) * hy
        else:
            rem = b
        z = math.gcd(z, rem)
    if h == 0 or z == 0:
        raise DegenerateLatticeError("generators span a rank-<2 lattice")
    hy %= z  # normalize the off-diagonal entry
    return (h, hy), (0, z)


def _extgcd(a, b):
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class SolutionClass:
    """One scalar-equivalence class x of solutions mod d, with lattice basis."""

    d: int
    rep: tuple
    primitive_m: bool
    basis: ReducedBasis
    rho: int = None  # root of g mod d when the representative is (1, rho)


def classes_uprime(form, d, roots=None):
    """The classes with m invertible mod d: one per root rho of g mod d.

    Representative (1, rho); lattice {(m,n): n = rho*m (mod d)} generated by
    (1, rho) and (0, d).
    """
    if d == 1:
        basis = gauss_reduce((1, 0), (0, 1))
        return [SolutionClass(1, (0, 0), True, basis, rho=0)]
    if roots is None:
        roots = congruence.roots_mod(form.dehomogenize(), d)
    if roots.modulus != d:
        raise ValueError("root set modulus mismatch")
    out = []
    for rho in roots:
        basis = gauss_reduce((1, rho), (0, d))
        out.append(SolutionClass(d, (1, rho), True, basis, rho=rho))
    return out


def _projective_reps(d, factorization):
    """Canonical representatives of P^1(Z/d): CRT products of the per-prime-
    power charts (1, t), t in [0, p^e), and (p*j, 1), j in [0, p^(e-1))."""
    charts = []
    moduli = []
    for p, e in factorization:
        pe = p**e
        reps = [(1, t) for t in range(pe)] + [(p * j, 1) for j in range(pe // p)]
        charts.append(reps)
        moduli.append(pe)
    combined = [(0, 0)]
    mod = 1
    for reps, q in zip(charts, moduli):
        inv = pow(mod, -1, q)
        nxt = []
        for m0, n0 in combined:
            for mr, nr in reps:
                tm = (mr - m0) * inv % q
                tn = (nr - n0) * inv % q
                nxt.append((m0 + mod * tm, n0 + mod * tn))
        combined = nxt
        mod *= q
    return combined


def classes_full(form, d, bound=EXHAUSTIVE_CLASS_BOUND):
    """Exhaustive enumeration of all solution classes mod d (d <= bound).

    Walks every point of the projective line over Z/d and keeps those where
    the form vanishes; this includes the classes whose representatives have
    gcd(m, d) > 1, which `classes_uprime` omits.
    """
    if d > bound:
        raise ValueError(f"exhaustive class enumeration capped at d <= {bound}")
    if d == 1:
        return classes_uprime(form, 1)
    fact = kernels.factor_u64(d)
    out = []
    for m, n in _projective_reps(d, fact):
        if form.evaluate(m, n) % d != 0:
            continue
        prim_m = math.gcd(m, d) == 1
        rho = n * pow(m, -1, d) % d if prim_m else None
        g1, g2 = basis_from_generators([(m, n), (d, 0), (0, d)])
        basis = gauss_reduce(g1, g2)
        out.append(SolutionClass(d, (m, n), prim_m, basis, rho=rho))
    return out


def orbit_size(d):
    """Size of every scalar orbit of a primitive point mod d: phi(d).

    The unit group acts freely on primitive points ((lambda-1)m = (lambda-1)n
    = 0 mod d with gcd(m,n,d)=1 forces lambda = 1).
    """
    if d == 1:
        return 1
    out = 1
    for p, e in kernels.factor_u64(d):
        out *= p ** (e - 1) * (p - 1)
    return out


def _ceil_div(a, b):
    return -((-a) // b)


def count_points_in_box(basis, N):
    """Exact number of lattice points in [0, N]^2, plus the standard
    estimate triple (N^2/det, N/|B1|, 1) used as a diagnostic.

    Enumerates the B2-fiber index b over an exact range and intersects the
    two coordinate constraints on the B1-index a.
    """
    x1, y1 = basis.b11, basis.b12
    x2, y2 = basis.b21, basis.b22
    det = basis.det
    if det == 0:
        raise DegenerateLatticeError("degenerate basis")
    lvals = [-y1 * X + x1 * Y for X in (0, N) for Y in (0, N)]
    bmin = _ceil_div(min(lvals), det)
    bmax = max(lvals) // det
    count = 0
    for b in range(bmin, bmax + 1):
        lo, hi = None, None
        empty = False
        for c, off in ((x1, b * x2), (y1, b * y2)):
            if c == 0:
                if not 0 <= off <= N:
                    empty = True
                    break
                continue
            if c > 0:
                clo = _ceil_div(-off, c)
                chi = (N - off) // c
            else:
                clo = _ceil_div(off - N, -c)
                chi = off // (-c)
            lo = clo if lo is None else max(lo, clo)
            hi = chi if hi is None else min(hi, chi)
        if empty:
            continue
        if lo is None:
            raise DegenerateLatticeError("zero basis row")
        if hi >= lo:
            count += hi - lo + 1
    est = (N * N / det, N / math.sqrt(basis.normsq1), 1.0)
    return count, est


def multiplicity_census(form, point, d_lo, d_hi):
    """Count pairs (d, x) with d in [d_lo, d_hi), x a class of U'(d), and
    `point` in the class lattice.

    Only divisors of f(point) can occur; membership of (u, v) in the class
    of root rho is the single congruence u*rho = v (mod d).
    """
    u, v = point
    value = form.evaluate(u, v)
    if value == 0:
        raise ValueError(f"f{point} = 0 (zero point or reducible form)")
    value = abs(value)
    g = form.dehomogenize()
    count = 0
    for d, fact in _divisors_with_factorizations(value):
        if not d_lo <= d < d_hi:
            continue
        roots = congruence.roots_mod(g, d, factorization=fact or None)
        for rho in roots:
            if (u * rho - v) % d == 0:
                count += 1
    return count


def _divisors_with_factorizations(n):
    """All divisors of n with their factorizations [(p,e),...] (unsorted)."""
    fact = kernels.factor_u64(n) if n < (1 << 63) else None
    if fact is None:
        from . import _pykernels

        fact = _pykernels.factor_u64(n)
    divs = [(1, [])]
    for p, e in fact:
        nxt = []
        for d0, f0 in divs:
            pe = 1
            for j in range(e + 1):
                nxt.append((d0 * pe, f0 + ([(p, j)] if j else [])))
                pe *= p
        divs = nxt
    return divs

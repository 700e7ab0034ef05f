"""Smooth weights, the lattice sum psi(lambda, N, alpha), its Poisson-dual
evaluation, the Farey counting check, and the lattice-family discrepancy
experiment.

psi sums alpha_m * W(n/N) over lattice points with 0 < m <= N; for a typical
lattice it should be close to N*What(0)/det * sum(alpha_m).  The dual form
rewrites each m-fiber by Poisson summation:

    psi = (N/d) * sum_v What(v*N/d) * sum_m alpha_m e(m*v*(B12 + d*B21inv)/(d*B11))

with e(x) = exp(2*pi*i*x) and B21inv the inverse of B21 mod B11, valid when
the m-coordinates of the lattice are coprime (gcd(B11, B21) = 1).  The v-sum
is truncated; the transform of the weight decays faster than any power, so a
modest v_max already reproduces the direct sum to high accuracy.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import congruence
from .lattice import ReducedBasis, classes_uprime
from .primes import sieve_primes

DEFAULT_QUAD_TOL = 1e-12

# below this, 1/(x(1-x)) exceeds 1000 and exp underflows to exactly 0.0,
# so the early return changes nothing
_BUMP_FLOOR = 1e-3


def bump(x):
    """The canonical weight exp(-1/(x(1-x))) on (0,1), zero elsewhere."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    t = x * (1.0 - x)
    if t <= _BUMP_FLOOR:
        return 0.0
    return math.exp(-1.0 / t)


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class WeightFunction:
    """Smooth nonnegative weight supported in [0,1], with cached transform.

    `hat(xi)` evaluates the Fourier transform integral
    int_0^1 W(x) exp(-2*pi*i*xi*x) dx by adaptive quadrature (oscillatory
    QUADPACK rules for xi != 0) to absolute tolerance `quad_tol`, caching
    each value; the dual evaluator asks for O(v_max) frequencies per lattice
    and reuses them across moduli.
    """

    def __init__(self, fn=bump, quad_tol=DEFAULT_QUAD_TOL):
        self.fn = fn
        self.quad_tol = quad_tol
        self._cache = {}

    def __call__(self, x):
        return self.fn(x)

    def table(self, N):
        """w[n] = W(n/N) for n in [0, N) as a float64 array."""
        return np.array([self.fn(n / N) for n in range(N)], dtype=np.float64)

    def _quad(self, weight, wvar):
        if weight is None:
            res = quad(self.fn, 0.0, 1.0, epsabs=self.quad_tol, epsrel=self.quad_tol,
                       limit=200, full_output=1)
        else:
            res = quad(self.fn, 0.0, 1.0, weight=weight, wvar=wvar,
                       epsabs=self.quad_tol, limit=400, maxp1=100, full_output=1)
        y, abserr = res[0], res[1]
        if abserr > 50 * self.quad_tol:
            raise QuadratureError(
                f"quadrature error {abserr:.2e} above tolerance (weight={weight}, wvar={wvar})"
            )
        return y

    def hat(self, xi):
        """Fourier transform What(xi) = int W(x) e(-xi x) dx (cached)."""
        xi = float(xi)
        if xi < 0.0:
            return self.hat(-xi).conjugate()
        val = self._cache.get(xi)
        if val is None:
            if xi == 0.0:
                val = complex(self._quad(None, None), 0.0)
            else:
                w = 2.0 * math.pi * xi
                re = self._quad("cos", w)
                im = -self._quad("sin", w)
                val = complex(re, im)
            self._cache[xi] = val
        return val

    def hat0(self):
        return self.hat(0.0).real


class CoefficientSequence:
    """Complex weights alpha_m, |alpha_m| <= 1, on the integers 1..n_max.

    The canonical instance is the prime indicator; `prime_support` records
    whether every nonzero weight sits on a prime index (the gcd>1 branch of
    the congruence sums has a fast path in that case).
    """

    def __init__(self, values, label="custom", prime_support=None):
        vals = np.asarray(values, dtype=np.complex128).copy()
        if vals.ndim != 1 or len(vals) < 2:
            raise ValueError("values must be a 1-d array indexed 0..n_max")
        vals[0] = 0
        if np.max(np.abs(vals)) > 1.0 + 1e-12:
            raise ValueError("coefficient bound |alpha_m| <= 1 violated")
        self.values = vals
        self.label = label
        if prime_support is None:
            idx = np.nonzero(vals)[0]
            if len(idx) == 0:
                prime_support = True
            else:
                pr = sieve_primes(int(idx.max()))
                prime_support = bool(np.isin(idx, pr).all())
        self.prime_support = prime_support

    @property
    def n_max(self):
        return len(self.values) - 1

    @classmethod
    def primes(cls, n_max):
        vals = np.zeros(n_max + 1, dtype=np.complex128)
        vals[sieve_primes(n_max)] = 1.0
        return cls(vals, label="primes", prime_support=True)

    @classmethod
    def ones(cls, n_max):
        vals = np.ones(n_max + 1, dtype=np.complex128)
        return cls(vals, label="ones", prime_support=False)

    @classmethod
    def zeros(cls, n_max):
        return cls(np.zeros(n_max + 1, dtype=np.complex128), label="zeros", prime_support=True)

    @classmethod
    def from_csv(cls, path, n_max):
        """User weights from CSV rows `m,re[,im]`; unlisted m are zero."""
        vals = np.zeros(n_max + 1, dtype=np.complex128)
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split(",")
                m = int(parts[0])
                re = float(parts[1]) if len(parts) > 1 else 0.0
                im = float(parts[2]) if len(parts) > 2 else 0.0
                if 1 <= m <= n_max:
                    vals[m] = complex(re, im)
        return cls(vals, label=f"csv:{path}")

    def nonzero_indices(self, N=None):
        idx = np.nonzero(self.values)[0]
        if N is not None:
            idx = idx[idx <= N]
        return idx

    def sum_upto(self, N):
        N = min(int(N), self.n_max)
        return complex(self.values[1 : N + 1].sum())


def _require_box(basis, N, alpha):
    if int(N) < 1:
        raise ValueError("N must be >= 1")
    if alpha.n_max < int(N):
        raise ValueError(f"coefficient sequence covers only m <= {alpha.n_max} < N = {N}")
    if basis.det <= 0:
        raise ValueError("basis must be positively oriented (use gauss_reduce)")


def psi_direct(basis, N, alpha, W):
    """The smoothed lattice sum by exact enumeration (the oracle side).

    For each m in (0, N] with alpha_m != 0, the lattice points above m form
    an arithmetic progression in n of step det/gcd(B11, B21); the weights
    W(n/N) are summed over its intersection with (0, N).
    """
    N = int(N)
    _require_box(basis, N, alpha)
    x1, y1 = basis.b11, basis.b12
    x2, y2 = basis.b21, basis.b22
    det = basis.det
    g0 = math.gcd(x1, x2)
    if g0 == 0:
        raise ValueError("lattice has no points with m != 0")
    step = det // g0
    _, s, t = _extgcd2(x1, x2)
    total = 0.0 + 0.0j
    for m in alpha.nonzero_indices(N):
        m = int(m)
        if m % g0:
            continue
        c = m // g0
        y0 = c * (s * y1 + t * y2)
        r = y0 % step
        start = r if r > 0 else step
        if start >= N:
            continue
        ws = 0.0
        for n in range(start, N, step):
            ws += W(n / N)
        total += complex(alpha.values[m]) * ws
    return total


def _extgcd2(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return abs(old_r), old_s, old_t


def main_term(lattice, N, alpha, W):
    """N * What(0) / det * sum_{m <= N} alpha_m."""
    det = lattice.det if isinstance(lattice, ReducedBasis) else int(lattice)
    return N * W.hat0() / det * alpha.sum_upto(N)


def default_v_max(d, N, delta):
    """Dual-sum truncation ceil(d * N**(delta - 1)); zero frequencies survive
    (and the dual sum collapses to the main term) whenever this is < 1."""
    return math.ceil(d * float(N) ** (delta - 1.0))


def psi_poisson(basis, N, alpha, W, v_max, b21inv_rep=None):
    """The smoothed lattice sum via its truncated Poisson-dual form.

    Requires gcd(B11, B21) = 1 (m-coordinates of the lattice coprime); the
    v = 0 term is exactly the main term.  Phases are reduced exactly in
    integer arithmetic, so shifting the representative of the inverse of B21
    mod B11 (the canonical one lies in [0, B11)) by any multiple of B11
    leaves the value bit-for-bit unchanged; `b21inv_rep` overrides it.
    """
    N = int(N)
    _require_box(basis, N, alpha)
    b11, b12 = basis.b11, basis.b12
    b21 = basis.b21
    d = basis.det
    if b11 < 1:
        raise ValueError("dual form needs B11 >= 1")
    if math.gcd(b11, b21) != 1:
        raise ValueError("dual form needs gcd(B11, B21) = 1")
    if b21inv_rep is None:
        b21inv = pow(b21, -1, b11) if b11 > 1 else 0
    else:
        b21inv = int(b21inv_rep)
        if (b21 * b21inv - 1) % b11 != 0:
            raise ValueError("b21inv_rep is not an inverse of B21 mod B11")
    den = d * b11
    amp = (b12 + d * b21inv) % den
    ms = alpha.nonzero_indices(N).astype(np.int64)
    if len(ms) == 0:
        return 0.0 + 0.0j
    avals = alpha.values[ms]
    use_numpy = den * N < (1 << 62)
    total = 0.0 + 0.0j
    for v in range(-v_max, v_max + 1):
        if v == 0:
            continue  # contributes the main term, added exactly below
        wh = W.hat(v * N / d)
        va = (v * amp) % den
        if va == 0:
            inner = complex(avals.sum())
        elif use_numpy:
            phases = (2.0 * math.pi / den) * ((va * ms) % den)
            inner = complex(np.sum(avals * np.exp(1j * phases)))
        else:
            inner = sum(
                complex(a) * complex(math.cos(2 * math.pi * ((va * int(m)) % den) / den),
                                     math.sin(2 * math.pi * ((va * int(m)) % den) / den))
                for a, m in zip(avals, ms)
            )
        total += wh * inner
    return main_term(basis, N, alpha, W) + (N / d) * total


def poisson_tail_bound(d, N, v_max, alpha, W, decay_exponent=4):
    """Empirical bound on the truncated dual tail.

    Measures C = |What(xi0)| * xi0**A at the first discarded frequency
    xi0 = (v_max+1) N / d and bounds the tail by the resulting power-law sum;
    the A-fold integration-by-parts estimate guarantees some finite C for
    every A, the measurement just avoids tracking its constant.
    """
    A = decay_exponent
    xi0 = (v_max + 1) * N / d
    C = abs(W.hat(xi0)) * xi0**A
    salpha = float(np.abs(alpha.values).sum())
    # sum_{v > v_max} (v N / d)^-A  <=  (d/N)^A * v_max^(1-A) / (A-1)
    tail = C * (d / N) ** A * v_max ** (1 - A) / (A - 1)
    return 2.0 * (N / d) * salpha * tail


def farey_count(m1, v_bound, b_of, a, q):
    """Exact count of pairs (B11, v) with B11 ~ m1, 0 < |v| <= v_bound and
    v*b(B11)/B11 = a/q (mod 1), by exhaustive rational reduction.

    `b_of` assigns to each B11 an integer b coprime to it.  Since the
    fraction's reduced denominator is B11/(B11; v) >= m1/v_bound regardless
    of b, the count is zero whenever q < m1/v_bound.
    """
    if q < 1 or not 0 <= a < q or math.gcd(a, q) != 1:
        raise ValueError("target must be a reduced fraction a/q with 0 <= a < q")
    count = 0
    for b11 in range(m1, 2 * m1):
        b = int(b_of(b11))
        if math.gcd(b, b11) != 1:
            raise ValueError(f"b = {b} not coprime to B11 = {b11}")
        for v in range(-v_bound, v_bound + 1):
            if v == 0:
                continue
            num = (v * b) % b11 if b11 > 1 else 0
            den = b11
            g = math.gcd(num, den)
            if den // g == q and num // g == a:
                count += 1
    return count


class FamilyHypothesisError(ValueError):
    """A lattice family violated the averaging hypotheses."""


@dataclass
class FamilySpec:
    """A family of lattices entering the averaged discrepancy experiment.

    Hypotheses (verified, not assumed): det in [D, 2D), B11 in [M1, 2M1),
    at most one lattice per B11 value, and coprime m-coordinates.
    """

    lattices: list
    N: int
    D: int
    M1: int
    delta: float = 0.05

    def hypothesis_violations(self):
        out = []
        seen = {}
        for i, b in enumerate(self.lattices):
            if not self.D <= b.det < 2 * self.D:
                out.append(f"lattice {i}: det {b.det} outside [{self.D}, {2*self.D})")
            if not self.M1 <= b.b11 < 2 * self.M1:
                out.append(f"lattice {i}: B11 {b.b11} outside [{self.M1}, {2*self.M1})")
            if math.gcd(b.b11, b.b21) != 1:
                out.append(f"lattice {i}: gcd(B11, B21) > 1")
            if b.b11 in seen:
                out.append(f"lattices {seen[b.b11]} and {i} share B11 = {b.b11}")
            else:
                seen[b.b11] = i
        return out

    @property
    def flags(self):
        v = self.hypothesis_violations()
        return {
            "det_in_range": not any("det" in s for s in v),
            "b11_in_range": not any("outside" in s and "B11" in s for s in v),
            "b11_distinct": not any("share" in s for s in v),
            "m_coprime": not any("gcd" in s for s in v),
        }

    def case_label(self):
        """Which regime of the averaged bound the parameters sit in."""
        n1d = float(self.N) ** (1.0 - self.delta)
        if self.D <= n1d:
            return "negligible"
        if self.D < self.M1 * n1d:
            return "large-sieve"
        return "out-of-range"


def build_family(form, D, M1, N, delta=0.05, cache=None):
    """Assemble a FamilySpec from the solution classes with det ~ D,
    keeping the first class seen for each B11 value in [M1, 2M1)."""
    if cache is None:
        cache = congruence.RootCache(form.dehomogenize(), 2 * D)
    lattices = []
    seen = set()
    for d in range(D, 2 * D):
        roots = cache.roots(d)
        if roots.count == 0:
            continue
        for cl in classes_uprime(form, d, roots):
            b = cl.basis
            if M1 <= b.b11 < 2 * M1 and b.b11 not in seen:
                seen.add(b.b11)
                lattices.append(b)
    return FamilySpec(lattices=lattices, N=N, D=D, M1=M1, delta=delta)


@dataclass
class FamilyReport:
    spec: FamilySpec
    rows: list = field(default_factory=list)  # (index, b11, det, psi, main, abs_err)
    total_error: float = 0.0
    trivial_scale: float = 0.0
    bound_shape: float = 0.0
    case: str = ""

    @property
    def ratio_to_trivial(self):
        return self.total_error / self.trivial_scale if self.trivial_scale else None

    @property
    def ratio_to_bound_shape(self):
        return self.total_error / self.bound_shape if self.bound_shape else None


def family_discrepancy(spec, alpha, W):
    """sum over the family of |psi_direct - main_term|, with the measured
    total compared against the trivial scale sum|main| and against the
    bound shape N * M1**-1/2 * D**1/2 (constants unknowable at desk scale).

    Raises FamilyHypothesisError when the family violates its hypotheses.
    """
    violations = spec.hypothesis_violations()
    if violations:
        raise FamilyHypothesisError("; ".join(violations))
    report = FamilyReport(
        spec=spec,
        bound_shape=spec.N * spec.M1 ** (-0.5) * spec.D**0.5,
        case=spec.case_label(),
    )
    for i, b in enumerate(spec.lattices):
        psi = psi_direct(b, spec.N, alpha, W)
        mt = main_term(b, spec.N, alpha, W)
        err = abs(psi - mt)
        report.rows.append((i, b.b11, b.det, psi, mt, err))
        report.total_error += err
        report.trivial_scale += abs(mt)
    return report

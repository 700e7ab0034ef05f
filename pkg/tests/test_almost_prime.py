import math
import random

import pytest

from formsieve import almost_prime as ap
from formsieve.forms import BinaryForm


def test_factor_examples(cubic):
    fv = ap.factor(12)
    assert fv.factors == ((2, 2), (3, 1)) and fv.omega == 3
    fv = ap.factor(1)
    assert fv.factors == () and fv.omega == 0
    v = cubic.evaluate(97, 89)
    assert ap.factor(v).multiply_back() == v


def test_factor_negative_and_zero():
    fv = ap.factor(-12)
    assert fv.value == -12 and fv.factors == ((2, 2), (3, 1))
    with pytest.raises(ValueError):
        ap.factor(0)


def test_factor_multiply_back_random():
    rng = random.Random(55)
    for _ in range(60):
        v = rng.randint(2, 10**14)
        fv = ap.factor(v)
        assert fv.multiply_back() == v
        # omega additivity on products
        u = rng.randint(2, 10**7)
        assert ap.factor(v * u).omega == fv.omega + ap.factor(u).omega


def test_factor_beyond_u64():
    v = 2**67 - 1  # classic: 193707721 * 761838257287
    fv = ap.factor(v)
    assert fv.factors == ((193707721, 1), (761838257287, 1))
    assert fv.multiply_back() == v


def test_factor_determinism_and_seed():
    a = ap.factor(600851475143)
    b = ap.factor(600851475143)
    assert a == b
    c = ap.factor(600851475143, rho_seed=5)
    assert c.factors == a.factors  # different schedule, same factorization


def test_r_threshold():
    assert ap.r_threshold(3) == 3
    assert ap.r_threshold(4) == 4
    assert ap.r_threshold(8) == 7
    for k in range(3, 200):
        r = ap.r_threshold(k)
        assert r == 3 * k // 4 + 1
        assert r > 0.75 * k + 0.15 and r - 1 <= 0.75 * k + 0.15
    with pytest.raises(ValueError):
        ap.r_threshold(2)


def test_tier_count():
    fv = ap.FactoredValue(2 * 2 * 3 * 49, ((2, 2), (3, 1), (7, 2)))
    # cut above 7: everything counted once per distinct prime below the cut
    assert fv.tier_count(10.0) == 3
    # cut between 3 and 7: the 7^2 counts with multiplicity
    assert fv.tier_count(5.0) == 1 + 1 + 2
    # cut below everything: plain omega
    assert fv.tier_count(1.5) == fv.omega == 5
    assert fv.min_prime() == 2


def test_census_small(cubic):
    rep = ap.census(cubic, 50)
    assert rep.r == 3
    assert rep.p_r_count > 0
    assert rep.total_pairs == sum(rep.counts_by_omega.values())
    # monotone in r
    assert rep.p_count(2) <= rep.p_count(3) <= rep.p_count(4)
    # r large enough counts every pair (omega is at most the bit length)
    assert rep.p_count(200) == rep.total_pairs
    assert rep.factor_failures == 0 and rep.skipped_zero == 0


def test_census_monotone_in_n(cubic):
    r30 = ap.census(cubic, 30)
    r60 = ap.census(cubic, 60)
    assert r60.p_r_count >= r30.p_r_count


def test_census_empty(cubic):
    rep = ap.census(cubic, 1)
    assert rep.total_pairs == 0 and rep.p_r_count == 0
    assert rep.normalized_density == 0.0


def test_census_parallel_determinism(cubic):
    r1 = ap.census(cubic, 40, jobs=1, collect_pairs=True)
    r2 = ap.census(cubic, 40, jobs=2, collect_pairs=True)
    assert r1.counts_by_omega == r2.counts_by_omega
    assert r1.pairs == r2.pairs


def test_census_pairs_and_summary(cubic):
    rep = ap.census(cubic, 20, collect_pairs=True)
    for p, n, v, om in rep.pairs:
        assert cubic.evaluate(p, n) == v
        assert ap.factor(v).omega == om
    s = rep.summary()
    assert s["p_r_count"] == rep.p_r_count
    assert s["counts_by_omega"] == {str(k): v for k, v in sorted(rep.counts_by_omega.items())}


def test_singular_series_mertens():
    # nu = 1 for every prime: g(t) = t
    lin = BinaryForm([0, 1])
    (z, est), = ap.singular_series(lin, [10**6])
    egamma = math.exp(-0.5772156649015329)
    assert abs(est - egamma) / egamma < 0.01
    assert ap.singular_series(lin, [2])[0][1] == math.log(2)


def test_singular_series_stabilizes(cubic):
    grid = ap.singular_series(cubic, [10**3, 10**4, 10**5, 10**6])
    vals = dict(grid)
    assert abs(vals[10**6] - vals[10**5]) / vals[10**5] < 0.10
    assert all(v > 0 for _z, v in grid)


def test_singular_series_rejects_fixed_divisor():
    with pytest.raises(ValueError):
        ap.singular_series(BinaryForm([2, 1, 1]), [100])  # nu(2) = 2


def test_sieve_constants(cubic):
    sc_ = ap.sieve_constants(cubic, (10**3, 10**4))
    assert sc_.degree == 3 and sc_.r == 3
    assert sc_.delta_r == 0.144001
    assert len(sc_.cf_estimates) == 2


def test_nu_average_near_one(cubic):
    # prime-counting average of nu over p <= 1e5
    from formsieve.kernels import frobenius_counts
    from formsieve.primes import sieve_primes

    primes = [int(p) for p in sieve_primes(10**5)]
    counts = frobenius_counts(cubic.dehomogenize(), primes)
    avg = sum(counts) / len(primes)
    assert 0.8 <= avg <= 1.2

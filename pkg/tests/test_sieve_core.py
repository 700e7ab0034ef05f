import math
import random

import numpy as np
import pytest

from formsieve import lattice as lat
from formsieve import sieve_core as sc

# frozen oracle values (mpmath, 40 digits) for the canonical bump transform
WHAT0 = 0.0070298584066096562392
WHAT1 = -0.004748089760051995022
WHAT55_IM = -1.8875868430299068012e-6
WHAT20 = -1.33213989648910252e-9


def test_bump_support_and_values(W):
    assert W(0.0) == 0.0 and W(1.0) == 0.0
    assert W(-0.3) == 0.0 and W(1.7) == 0.0
    assert W(0.5) == math.exp(-4.0)
    xs = np.linspace(-0.5, 1.5, 401)
    vals = np.array([W(x) for x in xs])
    assert (vals >= 0).all()
    assert vals[xs <= 0].max() == 0.0 and vals[xs >= 1].max() == 0.0


def test_hat_against_mpmath_oracle(W):
    assert W.hat0() == pytest.approx(WHAT0, abs=1e-12)
    assert W.hat(1.0) == pytest.approx(complex(WHAT1, 0.0), abs=1e-11)
    assert W.hat(5.5) == pytest.approx(complex(0.0, WHAT55_IM), abs=1e-11)
    assert W.hat(20.0) == pytest.approx(complex(WHAT20, 0.0), abs=1e-12)
    # reality of W gives conjugate symmetry
    assert W.hat(-5.5) == W.hat(5.5).conjugate()


def test_coefficient_sequences():
    chi = sc.CoefficientSequence.primes(200)
    assert chi.prime_support
    assert chi.sum_upto(100) == 25  # pi(100)
    ones = sc.CoefficientSequence.ones(50)
    assert not ones.prime_support
    assert ones.sum_upto(50) == 50
    with pytest.raises(ValueError):
        sc.CoefficientSequence([0, 2.0])  # |alpha| > 1
    custom = sc.CoefficientSequence([0, 0, 1, 0, 0, 1], label="x")
    assert custom.prime_support  # supported on {2, 5}
    custom2 = sc.CoefficientSequence([0, 0, 1, 0, 1, 0], label="x")
    assert not custom2.prime_support  # index 4


def test_coefficients_from_csv(tmp_path):
    path = tmp_path / "alpha.csv"
    path.write_text("# m,re,im\n2,1\n3,0.5,0.25\n99,1\n")
    alpha = sc.CoefficientSequence.from_csv(path, 10)  # row 99 out of range
    assert alpha.values[2] == 1 and alpha.values[3] == 0.5 + 0.25j
    assert alpha.sum_upto(10) == 1.5 + 0.25j
    assert alpha.prime_support


def test_psi_direct_examples(W):
    Z2 = lat.gauss_reduce((1, 0), (0, 1))
    N = 50
    ones = sc.CoefficientSequence.ones(N)
    val = sc.psi_direct(Z2, N, ones, W)
    expect = N * sum(W(n / N) for n in range(1, N))
    assert val == pytest.approx(expect, rel=1e-14)

    b5 = lat.gauss_reduce((1, 3), (0, 5))
    chi = sc.CoefficientSequence.primes(N)
    brute = sum(
        chi.values[m] * W(n / N)
        for m in range(1, N + 1)
        for n in range(1, N)
        if (n - 3 * m) % 5 == 0
    )
    assert sc.psi_direct(b5, N, chi, W) == pytest.approx(brute, rel=1e-13)

    assert sc.psi_direct(b5, N, sc.CoefficientSequence.zeros(N), W) == 0


def test_psi_direct_brute_random(W):
    rng = random.Random(11)
    done = 0
    while done < 25:
        g1 = (rng.randint(-5, 5), rng.randint(-5, 5))
        g2 = (rng.randint(-5, 5), rng.randint(-5, 5))
        if g1[0] * g2[1] - g1[1] * g2[0] == 0:
            continue
        done += 1
        b = lat.gauss_reduce(g1, g2)
        N = rng.randint(5, 60)
        alpha = sc.CoefficientSequence.primes(N)
        brute = sum(
            alpha.values[m] * W(n / N)
            for m in range(1, N + 1)
            for n in range(1, N)
            if b.contains(m, n)
        )
        assert sc.psi_direct(b, N, alpha, W) == pytest.approx(brute, abs=1e-12)


def test_main_term_examples(W):
    ones = sc.CoefficientSequence.ones(100)
    assert sc.main_term(1, 100, ones, W) == pytest.approx(100 * W.hat0() * 100, rel=1e-14)
    assert sc.main_term(5, 100, sc.CoefficientSequence.zeros(100), W) == 0
    chi = sc.CoefficientSequence.primes(100)
    assert sc.main_term(5, 100, chi, W) == pytest.approx(20 * W.hat0() * 25, rel=1e-14)


def test_psi_poisson_consistency(W):
    cases = [((1, 3), (0, 5), 200, 20), ((1, 7), (0, 11), 150, 25), ((1, 5), (0, 9), 120, 30)]
    for g1, g2, N, vmax in cases:
        b = lat.gauss_reduce(g1, g2)
        chi = sc.CoefficientSequence.primes(N)
        pd = sc.psi_direct(b, N, chi, W)
        pp = sc.psi_poisson(b, N, chi, W, vmax)
        assert abs(pd - pp) < 1e-6
        assert abs(pd - pp) <= max(
            sc.poisson_tail_bound(b.det, N, vmax, chi, W), 1e-8
        )


def test_psi_poisson_vanishing_case_exact(W):
    b = lat.gauss_reduce((1, 3), (0, 5))
    chi = sc.CoefficientSequence.primes(300)
    assert sc.default_v_max(5, 300, 0.05) == 1  # truncation barely nonempty
    # with an empty truncation the dual sum IS the main term
    assert sc.psi_poisson(b, 300, chi, W, 0) == sc.main_term(b, 300, chi, W)


def test_psi_poisson_b11_one_case(W):
    # B21 = 0 forces B11 = 1: single progression, trivial phase
    b = lat.gauss_reduce((1, 0), (0, 7))
    assert (b.b11, b.b21) == (1, 0)
    chi = sc.CoefficientSequence.primes(100)
    pd = sc.psi_direct(b, 100, chi, W)
    pp = sc.psi_poisson(b, 100, chi, W, 30)
    assert abs(pd - pp) < 1e-8


def test_psi_poisson_phase_representative_invariance(W):
    b = lat.gauss_reduce((1, 11), (0, 23))
    chi = sc.CoefficientSequence.primes(150)
    canon = pow(b.b21, -1, b.b11)
    v1 = sc.psi_poisson(b, 150, chi, W, 12, b21inv_rep=canon)
    v2 = sc.psi_poisson(b, 150, chi, W, 12, b21inv_rep=canon + b.b11)
    v3 = sc.psi_poisson(b, 150, chi, W, 12, b21inv_rep=canon - 3 * b.b11)
    assert v1 == v2 == v3 == sc.psi_poisson(b, 150, chi, W, 12)
    with pytest.raises(ValueError):
        sc.psi_poisson(b, 150, chi, W, 12, b21inv_rep=canon + 1)


def test_psi_poisson_requires_coprime_m_coords(W):
    b = lat.ReducedBasis(2, 0, 0, 2)
    with pytest.raises(ValueError):
        sc.psi_poisson(b, 50, sc.CoefficientSequence.primes(50), W, 5)


def test_psi_linearity(W):
    b = lat.gauss_reduce((1, 3), (0, 5))
    N = 80
    rng = np.random.default_rng(0)
    a1 = sc.CoefficientSequence(rng.random(N + 1) * 0.5, label="a1")
    a2 = sc.CoefficientSequence(rng.random(N + 1) * 0.5, label="a2")
    asum = sc.CoefficientSequence(a1.values + a2.values, label="sum")
    lhs = sc.psi_direct(b, N, asum, W)
    rhs = sc.psi_direct(b, N, a1, W) + sc.psi_direct(b, N, a2, W)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_farey_count_examples():
    # M1=10, V=1, b = 1: target 1/q and (q-1)/q each hit once for q in [10,20)
    for q in range(10, 20):
        assert sc.farey_count(10, 1, lambda b11: 1, 1, q) == 1
        assert sc.farey_count(10, 1, lambda b11: 1, q - 1, q) == 1
    assert sc.farey_count(10, 0, lambda b11: 1, 1, 13) == 0
    # vanishing case: q < M1/V
    assert sc.farey_count(100, 5, lambda b11: b11 - 1 if b11 > 1 else 1, 1, 7) == 0
    with pytest.raises(ValueError):
        sc.farey_count(10, 1, lambda b11: 1, 2, 4)  # 2/4 not reduced
    with pytest.raises(ValueError):
        sc.farey_count(4, 1, lambda b11: 2, 1, 3)  # b not coprime to some B11


def test_farey_denominator_floor_property():
    # reduced denominator of v*b/B11 is B11/(B11;v) >= M1/V, independent of b
    rng = random.Random(31)
    for _ in range(50):
        m1 = rng.randint(1, 60)
        V = rng.randint(1, 10)
        for b11 in range(m1, 2 * m1):
            for v in range(1, V + 1):
                q = b11 // math.gcd(b11, v)
                assert q >= m1 / V


def test_family_trivial_smooth_case(W):
    Z2 = lat.gauss_reduce((1, 0), (0, 1))
    spec = sc.FamilySpec(lattices=[Z2], N=64, D=1, M1=1)
    rep = sc.family_discrepancy(spec, sc.CoefficientSequence.ones(64), W)
    # Riemann sum of a smooth compact bump converges superpolynomially
    assert rep.total_error < 1e-6
    empty = sc.FamilySpec(lattices=[], N=64, D=1, M1=1)
    assert sc.family_discrepancy(empty, sc.CoefficientSequence.ones(64), W).total_error == 0


def test_family_from_classes_pinned(cubic, W):
    # derived fixture: d ~ 64, M1 = 4, N = 256, prime coefficients
    spec = sc.build_family(cubic, 64, 4, 256)
    assert not spec.hypothesis_violations()
    rep = sc.family_discrepancy(spec, sc.CoefficientSequence.primes(256), W)
    assert rep.total_error < rep.trivial_scale  # strictly below the trivial bound
    assert rep.ratio_to_trivial == pytest.approx(0.005879516814940724, rel=1e-6)
    assert len(spec.lattices) == 4


def test_family_hypothesis_violations(W):
    b1 = lat.gauss_reduce((1, 3), (0, 5))
    spec = sc.FamilySpec(lattices=[b1, b1], N=50, D=5, M1=1)
    with pytest.raises(sc.FamilyHypothesisError):
        sc.family_discrepancy(spec, sc.CoefficientSequence.primes(50), W)
    bad_det = sc.FamilySpec(lattices=[b1], N=50, D=50, M1=1)
    assert bad_det.hypothesis_violations()
    flags = sc.FamilySpec(lattices=[b1], N=50, D=5, M1=1).flags
    assert all(flags.values())

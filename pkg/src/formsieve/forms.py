"""Integer binary forms: exact evaluation, dehomogenization, admissibility.

A form f(x,y) = sum a_i x^(k-i) y^i is stored by its coefficient list
a_0..a_k, so the dehomogenization g(t) = f(1,t) is the identity-indexed
list.  Values are arbitrary-precision; only the congruence and lattice
layers restrict themselves to 64-bit moduli.
"""

import math
from dataclasses import dataclass, field

from . import polymod
from .primes import sieve_primes

# primes used when hunting for an irreducibility certificate mod p
_EVIDENCE_PRIME_COUNT = 100


class InadmissibleFormError(ValueError):
    """Form rejected at the boundary: content > 1, a fixed prime divisor,
    or no irreducibility certificate without an explicit override."""


@dataclass(frozen=True)
class BinaryForm:
    """Binary form with integer coefficients; coeffs[i] multiplies x^(k-i) y^i."""

    coeffs: tuple

    def __init__(self, coeffs):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) < 2:
            raise ValueError("a binary form needs degree >= 1 (at least two coefficients)")
        if coeffs[0] == 0 and coeffs[-1] == 0:
            raise ValueError("a_0 and a_k both zero (form divisible by xy)")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def parse(cls, text):
        """Parse the CLI syntax 'a0,a1,...,ak'."""
        try:
            coeffs = [int(part.strip()) for part in text.split(",")]
        except ValueError as exc:
            raise ValueError(f"malformed form string {text!r}: {exc}") from None
        return cls(coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def f0(self):
        """Coefficient of y^k."""
        return self.coeffs[-1]

    @property
    def content(self):
        return math.gcd(*self.coeffs)

    def evaluate(self, m, n):
        """Exact f(m, n) as a Python int (no overflow at any size).

        Horner over the partial sums S_j = m*S_{j-1} + a_j n^j.
        """
        m, n = int(m), int(n)
        acc = 0
        npow = 1
        for a in self.coeffs:
            acc = acc * m + a * npow
            npow *= n
        return acc

    def dehomogenize(self):
        """g(t) = f(1, t) as an identity-indexed coefficient tuple."""
        return self.coeffs

    def __str__(self):
        return ",".join(str(c) for c in self.coeffs)


@dataclass
class AdmissibilityReport:
    content: int
    fixed_divisor_violations: list = field(default_factory=list)
    irreducible_evidence: str = "INCONCLUSIVE"

    @property
    def no_fixed_divisor(self):
        return self.content == 1 and not self.fixed_divisor_violations

    @property
    def admissible(self):
        return self.no_fixed_divisor

    def to_json(self):
        return {
            "content": self.content,
            "fixed_divisor_violations": list(self.fixed_divisor_violations),
            "irreducible_evidence": self.irreducible_evidence,
        }


def _roots_brute(g, p):
    return [t for t in range(p) if _poly_eval_mod(g, t, p) == 0]


def _poly_eval_mod(coeffs, t, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * t + c) % p
    return acc


def admissibility_check(f):
    """Check content, fixed prime divisors, and hunt for irreducibility evidence.

    Fixed divisors only need testing at primes p <= deg f: for larger p a
    content-1 form has g(t) nonzero mod p, hence at most deg g < p roots.
    Irreducibility evidence is the sufficient criterion 'g irreducible of
    degree k mod p' for some p among the first 100 primes not dividing a_k;
    when no such p certifies, the report stays INCONCLUSIVE and callers must
    assert irreducibility explicitly.
    """
    k = f.degree
    g = f.dehomogenize()
    report = AdmissibilityReport(content=f.content)
    small = [int(p) for p in sieve_primes(max(k, 2)) if p <= k]
    for p in small:
        if len(_roots_brute(g, p)) == p:
            report.fixed_divisor_violations.append(p)
    if f.f0 != 0:
        for p in sieve_primes(600)[:_EVIDENCE_PRIME_COUNT]:
            p = int(p)
            if f.f0 % p == 0:
                continue
            if polymod.is_irreducible_mod_p(list(g), p):
                report.irreducible_evidence = f"PASS({p})"
                break
    return report


def require_admissible(f, assume_irreducible=False):
    """Boundary gate: raise InadmissibleFormError unless f passes.

    Content or fixed-divisor failures are hard rejects; a missing
    irreducibility certificate is rejected unless `assume_irreducible`.
    Returns the report for echoing into output headers.
    """
    report = admissibility_check(f)
    if report.content > 1:
        raise InadmissibleFormError(
            f"content {report.content} > 1: every value shares a fixed divisor"
        )
    if report.fixed_divisor_violations:
        ps = ",".join(str(p) for p in report.fixed_divisor_violations)
        raise InadmissibleFormError(f"fixed prime divisor(s) at p={ps} (all residues are roots)")
    if report.irreducible_evidence == "INCONCLUSIVE" and not assume_irreducible:
        raise InadmissibleFormError(
            "no irreducibility certificate found; pass --assume-irreducible to proceed"
        )
    return report

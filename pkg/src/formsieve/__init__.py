"""formsieve: congruence lattices and almost-prime values of binary forms.

The package evaluates, at desk scale, the constructive objects behind a
sieve experiment on integer binary forms f(x,y): root counts of the
dehomogenized congruence f(1,t) = 0 (mod d), solution-class lattices with
Gauss-reduced bases, smoothed lattice sums with a Poisson-dual evaluator,
level-of-distribution discrepancy sweeps, and an almost-prime census of
the values f(p,n) over primes p.

Hot inner loops live in a compiled Cython extension with a pure-Python
fallback; see :mod:`formsieve.kernels`.
"""

__version__ = "0.1.0"

from .forms import BinaryForm, admissibility_check
from .kernels import BACKEND

__all__ = ["BinaryForm", "admissibility_check", "BACKEND", "__version__"]

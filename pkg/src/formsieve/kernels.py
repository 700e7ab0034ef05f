"""Kernel backend selection: compiled Cython extension or pure Python.

The compiled extension `formsieve._ckernels` is preferred when importable;
setting the environment variable FORMSIEVE_PURE (to any nonempty value)
forces the pure backend, which is what the benchmark harness uses to compare
the two.  Both backends expose the same functions with identical semantics;
`tests/test_kernels.py` checks parity.
"""

import os

if os.environ.get("FORMSIEVE_PURE"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernels as _impl

BACKEND = _impl.BACKEND_NAME
MAX_MODULUS = _impl.MAX_MODULUS

poly_roots_mod = _impl.poly_roots_mod
frobenius_counts = _impl.frobenius_counts
solutions_mod = _impl.solutions_mod
count_congruence_solutions = _impl.count_congruence_solutions
factor_u64 = _impl.factor_u64
is_prime_u64 = _impl.is_prime_u64


def ad_weight_sums(fcoeffs, d, N, w, noncoprime_only=False):
    """Backend-normalized wrapper: always returns a float64 numpy array."""
    import numpy as np

    w = np.ascontiguousarray(w, dtype=np.float64)
    out = _impl.ad_weight_sums(fcoeffs, d, N, w, noncoprime_only)
    return np.asarray(out, dtype=np.float64)


def get_backend(name):
    """Explicit backend module by name ('cython' or 'python'); for benchmarks."""
    if name == "python":
        from . import _pykernels

        return _pykernels
    if name == "cython":
        from . import _ckernels  # type: ignore[attr-defined]

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")

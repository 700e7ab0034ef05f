"""Build script: compiles the Cython kernel extension when a toolchain is
available.  The package works without it (pure-Python fallback selected at
import time), so a failed extension build is not fatal for `pip install`."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "formsieve._ckernels",
                ["src/formsieve/_ckernels.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        language_level=3,
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)

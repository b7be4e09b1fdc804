"""Build script: compiles the optional BPE training kernel when Cython and a
C compiler are available. The package falls back to the pure-Python kernel
at import time, so a plain install without a compiler still works."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/fitclams/_kernels/_bpe_cy.pyx"],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)

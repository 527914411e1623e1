"""Build script: compiles the optional integer-reduction kernel.

The compiled kernel is a pure speedup; the package is fully functional
without it (cechlift.kernels falls back to the Python implementation at
import time).  Build failures are therefore non-fatal.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "cechlift._snf_cy",
                ["src/cechlift/_snf_cy.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)

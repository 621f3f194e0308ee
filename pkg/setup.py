"""Build script: compiles the optional sequence-scan extension.

The extension is a pure speedup; if Cython (or a C compiler) is missing the
package falls back to ``devmine.kernels._pyimpl`` at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/devmine/kernels/_speedups.pyx"],
        compiler_directives={"language_level": 3, "boundscheck": False, "wraparound": False},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)

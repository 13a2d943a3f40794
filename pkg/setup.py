"""Build script for the optional compiled solver kernels.

The package is pure Python except for zuecap._kernels._speedups, a small
Cython extension mirroring zuecap._kernels.reference. If Cython (or a C
compiler) is unavailable the extension is skipped and the package falls
back to the pure-Python kernels at import time.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ZUECAP_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext = Extension(
            "zuecap._kernels._speedups",
            ["src/zuecap/_kernels/_speedups.pyx"],
            optional=True,
        )
        ext_modules = cythonize([ext], language_level=3)

setup(ext_modules=ext_modules)

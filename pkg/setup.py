"""Builds the optional compiled search kernel.

The package is fully functional without it (a pure-Python kernel is
selected at import time), so any build failure here should be treated as
"install without the extension", e.g. `ORSPLIT_PURE=1 pip install .`.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ORSPLIT_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "orsplit._kernel._fastcore",
                    sources=["src/orsplit/_kernel/_fastcore.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)

"""Build hook: compiles the optional acceptance-kernel extension.

The package works without it (pure-Python fallback is selected at import
time); set PREFARG_NO_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("PREFARG_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/prefarg/_semantics/_speedups.pyx"],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)

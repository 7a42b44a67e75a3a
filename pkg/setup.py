"""Build script: compiles the optional Cython kernel extension.

Set DTMOTOR_NO_EXT=1 to skip the extension entirely; the package then
falls back to the pure-Python kernels at import time.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("DTMOTOR_NO_EXT") and os.path.exists("src/dtmotor/_kernels.pyx"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("dtmotor._kernels", ["src/dtmotor/_kernels.pyx"])],
            language_level=3,
        )
    except ImportError:
        pass  # no Cython: pure-Python fallback is used

setup(ext_modules=ext_modules)

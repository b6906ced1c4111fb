"""Build script: compiles the optional Cython kernel core.

The package works without the extension (a NumPy fallback is selected at
import time); set KPLANE_AUDIT_NO_EXT=1 to skip the build entirely.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("KPLANE_AUDIT_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "kplane_audit._kernels._cython",
                    ["src/kplane_audit/_kernels/_cython.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)

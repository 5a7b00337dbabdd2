"""Build hook for the compiled box-pair kernel.

The extension is optional: when the build fails (no compiler, no Cython)
the package falls back to the pure-Python kernel selected at import time
in ``bimql.geom.adjacency``.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/bimql/geom/_boxpairs.pyx"],
        language_level="3",
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    print(f"bimql: skipping compiled kernel ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)

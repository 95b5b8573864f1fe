"""Build script for the optional compiled layout kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so compilation failures are non-fatal.
"""

import sys

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/atlas/reducer/_sgd.pyx",
        language_level=3,
        compiler_directives={"boundscheck": False, "wraparound": False, "cdivision": True},
    )
    include_dirs = [numpy.get_include()]
except Exception as exc:  # pragma: no cover - build environment dependent
    print(f"atlas: skipping compiled layout kernel ({exc})", file=sys.stderr)
    ext_modules = []
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)

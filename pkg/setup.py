"""Build script: compiles the optional fast polynomial kernel.

The package works without the extension (a pure-Python twin is selected at
import time), so any failure to compile is demoted to a warning.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("qhopf._kernel_cy", ["src/qhopf/_kernel_cy.pyx"])],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    sys.stderr.write(f"warning: fast kernel not built ({exc}); using pure-Python kernel\n")

setup(ext_modules=ext_modules)

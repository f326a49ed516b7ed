"""Build the optional compiled kernels.

The package works without the extension (a pure-NumPy loop is selected at
import time); set NETSGD_SKIP_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("NETSGD_SKIP_EXT", "0") != "1":
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "netsgd._kernels",
                ["src/netsgd/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)

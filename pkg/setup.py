"""Build script.

The compiled kernels are optional: if Cython or a C++ compiler is missing
the package installs in pure-Python mode and gridpeel._kernels falls back
automatically at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "gridpeel._core",
                ["src/gridpeel/_core.pyx"],
                language="c++",
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)

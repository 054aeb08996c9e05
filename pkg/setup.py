"""Build script: compiles the scan kernel when Cython is available.

The package is fully functional without the extension; `admissibility.kernels`
falls back to the pure-Python kernel at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "admissibility._kernels",
                ["src/admissibility/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)

"""Build script for the optional compiled similarity kernel.

The extension is marked optional: if no C toolchain (or Cython) is available
the install still succeeds and the package falls back to the pure-Python
kernel at import time.
"""
from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "linkpred._kernels._simcore",
                ["src/linkpred/_kernels/_simcore.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)

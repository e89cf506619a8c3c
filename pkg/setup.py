"""Build script: compiles the optional fast kernels.

The compiled extension is an accelerator only. If Cython or a C compiler is
unavailable the package installs without it and falls back to the pure-Python
kernels at import time (see cml.backend). -ffp-contract=off keeps the compiled
floating-point results bit-identical to the Python fallback.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "cml._ckernels",
                ["src/cml/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O2", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)

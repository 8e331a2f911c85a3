import os

import numpy as np
from setuptools import Extension, setup

# LPCOMPACT_NO_EXT=1 skips the Cython build; the package then runs on the
# pure-Python kernels.
ext_modules = []
if not os.environ.get("LPCOMPACT_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "lpcompact._kernels",
                    ["src/lpcompact/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    # finite inputs only, so the C99 inf/nan recovery in complex
                    # multiplication (a libcall per product) is not needed
                    extra_compile_args=["-O3", "-fcx-limited-range"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )

setup(ext_modules=ext_modules)

import os

import numpy as np
from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

compileargs = ["-O3", "-fno-fast-math"]
linkargs = []
if os.environ.get("HYPPP_NO_OPENMP") != "1":
    compileargs.append("-fopenmp")
    linkargs.append("-fopenmp")

ext_modules = []
if cythonize is not None and os.environ.get("HYPPP_PURE") != "1":
    extensions = [
        Extension(
            "hyppp._speedups",
            ["src/hyppp/_speedups.pyx"],
            include_dirs=[np.get_include()],
            extra_compile_args=compileargs,
            extra_link_args=linkargs,
            optional=True,
        )
    ]
    ext_modules = cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)

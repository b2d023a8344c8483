"""Build the optional Cython kernels; the package works without them."""

import os

from setuptools import Extension, setup


def _extensions():
    if os.environ.get("LBMCRACK_NO_EXT"):
        return []
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "lbmcrack._ckernels",
        ["src/lbmcrack/_ckernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=_extensions())

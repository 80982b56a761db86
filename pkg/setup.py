import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; qlitho falls back at import
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("QLITHO_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "qlitho._kernels",
                ["src/qlitho/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)

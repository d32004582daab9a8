import os

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# the normal-fill used by the OU kernel lives in numpy's static npyrandom lib
_npyrandom_dir = os.path.join(os.path.dirname(np.__file__), "random", "lib")

# -ffp-contract=off keeps mul+add sequences identical to numpy's elementwise
# ops so the compiled kernels and the pure-python fallback agree bitwise on
# everything except dot-product reductions (see heatvar._backend).
extensions = [
    Extension(
        "heatvar._kernels",
        ["src/heatvar/_kernels.pyx"],
        include_dirs=[np.get_include()],
        library_dirs=[_npyrandom_dir],
        libraries=["npyrandom"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}))

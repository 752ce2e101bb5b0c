import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# No -ffast-math: it lets the compiler reassociate away the compensation term.
extensions = [
    Extension(
        "lpns._kernels",
        ["src/lpns/_kernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3", "-fno-fast-math"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)

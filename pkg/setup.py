import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "fbstokes._kernels._symbols_cy",
                ["src/fbstokes/_kernels/_symbols_cy.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython available: install the pure-Python package, the kernel
    # selector falls back to the numpy implementation at import time.
    ext_modules = []

setup(ext_modules=ext_modules)

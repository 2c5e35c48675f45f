import numpy
from setuptools import Extension, setup

# The compiled stepping kernel is optional: if Cython or a C compiler is
# missing the package still installs and falls back to the numpy kernel.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "qbilliard._kernel",
                ["src/qbilliard/_kernel.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    import warnings

    warnings.warn("Cython not available, building without the compiled kernel")
    ext_modules = []

setup(ext_modules=ext_modules)

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [Extension("coarsecyl._kernels", ["src/coarsecyl/_kernels.pyx"],
                   include_dirs=[numpy.get_include()])],
        compiler_directives={"language_level": "3", "boundscheck": False,
                             "wraparound": False},
    )

setup(ext_modules=ext_modules)

"""Build script for the optional compiled polynomial kernels.

The package is fully functional without the extension (a pure-Python
twin of every kernel ships in qsum._zxpy and is selected at import when
the compiled module is absent).  Build in place with:

    python setup.py build_ext --inplace
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("qsum._zxc", sources=["src/qsum/_zxc.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            
        },
    )

setup(ext_modules=ext_modules)

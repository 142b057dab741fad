"""Build script: compiles the optional C kernel extension.

The package works without it (a pure-numpy twin is selected at import
time); build in-place with

    python setup.py build_ext --inplace

to activate the compiled path.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "georegret._speedups",
                ["src/georegret/_speedups.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level="3",
    )
except ImportError:
    # No Cython / numpy headers: install pure-Python only.
    pass

setup(ext_modules=ext_modules)

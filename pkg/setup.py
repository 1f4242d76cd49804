import os

from setuptools import setup

ext_modules = []
if os.environ.get("NORMFORGE_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/normforge/_speedups.pyx"], language_level=3
        )
    except ImportError:
        # no Cython: the pure-Python kernel in _align_py is used instead
        pass

setup(ext_modules=ext_modules)

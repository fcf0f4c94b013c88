"""Builds the optional compiled cell kernel; the package works without it."""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("JP_NO_EXTENSION", "") not in ("1", "true"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            ["src/jacobi_perron/_cell_kernel.pyx"],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )

setup(ext_modules=ext_modules)

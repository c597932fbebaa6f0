"""Build script for the optional compiled kernel.

The package works without the extension: eprgames._kernels falls back to a
numpy implementation that produces bit-identical results.  Any failure while
cythonizing or compiling therefore downgrades to a pure-Python install
instead of aborting.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "eprgames._kernels._native",
                ["src/eprgames/_kernels/_native.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception:
    extensions = []

setup(ext_modules=extensions)

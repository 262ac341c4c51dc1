import os

from setuptools import Extension, setup

# DICHROMA_NO_EXT=1 builds a pure-Python install; the package then runs on
# the fallback kernels.
ext_modules = []
if os.environ.get("DICHROMA_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "dichroma._ckernels",
                    ["src/dichroma/_ckernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )

setup(ext_modules=ext_modules)

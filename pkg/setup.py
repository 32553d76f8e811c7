"""Builds the optional compiled power-iteration kernel.

The package is fully functional without it (a pure-Python kernel is selected at
import time); the extension only speeds up the float spectral-radius loop. Any
build problem (no Cython, no compiler) downgrades to the pure install.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            print(f"skipping compiled kernel ({exc}); using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"skipping {ext.name} ({exc}); using pure-Python fallback")


def extensions():
    if os.environ.get("ENTROPYGAMES_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "entropygames.kernels._power",
        ["src/entropygames/kernels/_power.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})

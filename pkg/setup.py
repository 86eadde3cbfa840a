"""Build hooks for the optional compiled kernel.

The package is pure Python plus one small Cython extension mirroring
``cuspfol/_kernel_py.py``.  The extension is a speedup, never a requirement:
if Cython or a C compiler is unavailable (or compilation fails) the build
proceeds and the pure kernel is selected at import time.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing etc.
            print(f"warning: skipping compiled kernel ({exc}); pure-Python kernel will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); pure-Python kernel will be used")


ext_modules = []
pyx = os.path.join("src", "cuspfol", "_kernel.pyx")
if os.path.exists(pyx):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("cuspfol._kernel", [pyx])],
            language_level=3,
        )
    except ImportError:
        print("warning: Cython not available; pure-Python kernel will be used")

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})

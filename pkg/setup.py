"""Build script: compiles the optional Cython scan kernel.

The package works without the compiled extension (a pure-Python fallback is
selected at import time), so a failing C build downgrades to a warning
instead of aborting the install.  Set DBEXPLAIN_PURE=1 to skip the build,
DBEXPLAIN_REQUIRE_C=1 to make build failures fatal.
"""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            self._downgrade(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._downgrade(exc)

    @staticmethod
    def _downgrade(exc):
        if os.environ.get("DBEXPLAIN_REQUIRE_C") == "1":
            raise
        print(f"warning: compiled kernel build failed ({exc}); "
              "falling back to the pure-Python scan kernel", file=sys.stderr)


def extensions():
    if os.environ.get("DBEXPLAIN_PURE") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        if os.environ.get("DBEXPLAIN_REQUIRE_C") == "1":
            raise
        return []
    ext = Extension(
        "dbexplain.kernels._scan_c",
        sources=["src/dbexplain/kernels/_scan_c.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})

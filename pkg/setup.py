import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None


class optional_build_ext(build_ext):
    """Build the accelerator extension if possible, else fall back to pure Python."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    @staticmethod
    def _skip(exc):
        print(f"warning: building the compiled kernel failed ({exc}); "
              "kmerwaits will use the pure-Python kernels")


extensions = []
if cythonize is not None and not os.environ.get("KMERWAITS_SKIP_EXT"):
    extensions = cythonize(
        [Extension("kmerwaits._kernels", ["src/kmerwaits/_kernels.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )

setup(ext_modules=extensions, cmdclass={"build_ext": optional_build_ext})

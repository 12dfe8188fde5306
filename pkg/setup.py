# Builds the optional compiled kernel.  The package is fully functional
# without it (pure-Python fallback selected at import); a failed extension
# build therefore only warns.
#
#   python setup.py build_ext --inplace      # local dev build
#   pip install -e . --no-build-isolation    # normal editable install

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: compiled kernel skipped ({exc}); "
                  "pure-Python fallback will be used", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "pure-Python fallback will be used", file=sys.stderr)


import os

try:
    from Cython.Build import cythonize
    pyx = "src/dymart/_shiftcore.pyx"
    if os.path.exists(pyx):
        extensions = cythonize(
            [Extension("dymart._shiftcore", sources=[pyx],
                       extra_compile_args=["-O2"])],
            language_level=3,
        )
    else:
        extensions = []
except ImportError:
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": optional_build_ext})

import os

from setuptools import Extension, setup

# The compiled scanner/verifier is an optimisation, not a requirement: the
# package selects a pure-Python twin at import time when the extension is
# missing (see vulnaudit/kernels.py). VULNAUDIT_NO_EXT=1 skips the build.
ext_modules = []
if not os.environ.get("VULNAUDIT_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("vulnaudit._kernels", ["src/vulnaudit/_kernels.pyx"])],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)

"""Build the optional compiled kernels; the package works without them."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("BELLFRAME_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(["src/bellframe/_kernels.pyx"],
                                compiler_directives={"language_level": "3"}, quiet=True)

setup(ext_modules=ext_modules)

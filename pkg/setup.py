"""Build script for the optional Cython kernels.

The package works without the compiled extension; ``qortho.kernels`` falls
back to the pure-Python implementation when ``qortho._ckernels`` is absent.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("QORTHO_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "qortho._ckernels",
                    ["src/qortho/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    # no FMA contraction: keeps results bit-identical to the
                    # numpy fallback for the recurrence kernel
                    extra_compile_args=["-O2", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)

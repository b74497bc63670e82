"""Build the optional compiled kernel.

If Cython or a C compiler is unavailable the package still installs and runs
on the pure-Python kernel.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("BUNGEE_NO_EXT") != "1":
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
                    "bungee._ckernel",
                    ["src/bungee/_ckernel.pyx"],
                    include_dirs=[np.get_include()],
                    # no FMA contraction, fast-math or sin+cos -> sincos fusion: results must
                    # match the Python twin bit for bit
                    extra_compile_args=["-O3", "-ffp-contract=off", "-fno-fast-math", "-fno-builtin"],
                    libraries=["m"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "mgear.protocol._kernel",
        ["src/mgear/protocol/_kernel.pyx"],
        include_dirs=[np.get_include()],
        # no fast-math / fp contraction: the compiled and pure-Python kernels must agree bit for bit
        extra_compile_args=["-O2", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
